"""Work splitting for the trial pool."""

from collections.abc import Sequence
from typing import TypeVar

T = TypeVar("T")


def split_batches(items: Sequence[T], size: int) -> list[Sequence[T]]:  # noqa: UP047
    """Cut ``items`` into consecutive slices of at most ``size`` elements.

    Slices keep the original order, so concatenating per-batch results
    restores trial-index order.

    Raises:
        ValueError: If size is not positive.

    Examples:
        >>> split_batches(range(5), 2)
        [range(0, 2), range(2, 4), range(4, 5)]
    """
    if size <= 0:
        raise ValueError(f"Batch size must be positive, got {size}")
    return [items[start : start + size] for start in range(0, len(items), size)]
