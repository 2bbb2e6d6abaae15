"""Bit-level value types: bit strings over F_2, truth tables and reduced bases.

Index convention (global): coordinate ``j`` of a :class:`BitString` is bit ``j``
of its integer ``value`` (little-endian). A position index ``i`` of a codeword
or truth table, read as a vector, therefore has coordinate ``j`` equal to bit
``j`` of the integer ``i``.

Two text forms exist:

- *label* form (``to_label``): the binary numeral of ``value`` padded to
  ``length``, most significant coordinate first. Used for short vectors
  (y, s, z and register labels), e.g. y with coordinate 0 set prints as ``01``.
- *table* form (``to_table``): coordinate 0 first. Used for truth tables and
  codewords, where position order matters, e.g. ``0101`` has x_1 = x_3 = 1.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt


@dataclass(frozen=True, slots=True)
class BitString:
    """Immutable bit string of fixed length backed by a packed integer.

    Attributes:
        value: Packed bits; bit j is coordinate j.
        length: Number of coordinates.
    """

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"BitString length must be non-negative, got {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"Value {self.value} does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> "BitString":
        return cls((1 << length) - 1, length)

    @classmethod
    def from_label(cls, label: str) -> "BitString":
        """Parse label form (most significant coordinate first).

        Examples:
            >>> BitString.from_label("01").value
            1
        """
        _check_binary(label)
        return cls(int(label, 2) if label else 0, len(label))

    @classmethod
    def from_table(cls, table: str) -> "BitString":
        """Parse table form (coordinate 0 first).

        Examples:
            >>> BitString.from_table("0101").value
            10
        """
        _check_binary(table)
        return cls(int(table[::-1], 2) if table else 0, len(table))

    @classmethod
    def from_bits(cls, bits: Iterable[int] | npt.NDArray[np.integer]) -> "BitString":
        """Build from a coordinate sequence, coordinate 0 first."""
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("Bits must be 0 or 1")
        packed = np.packbits(arr, bitorder="little")
        return cls(int.from_bytes(packed.tobytes(), "little"), int(arr.size))

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(f"Coordinate {j} out of range for length {self.length}")
        return (self.value >> j) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return (self[j] for j in range(self.length))

    def __xor__(self, other: "BitString") -> "BitString":
        _check_same_length(self, other)
        return BitString(self.value ^ other.value, self.length)

    def __str__(self) -> str:
        return self.to_label()

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def leading_index(self) -> int:
        """Smallest set coordinate, ``min{i : b[i] = 1}``.

        Raises:
            ValueError: If the string is all zero.
        """
        if self.value == 0:
            raise ValueError("Zero vector has no leading index")
        return (self.value & -self.value).bit_length() - 1

    def flip(self, j: int) -> "BitString":
        if not 0 <= j < self.length:
            raise IndexError(f"Coordinate {j} out of range for length {self.length}")
        return BitString(self.value ^ (1 << j), self.length)

    def to_label(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_table(self) -> str:
        return self.to_label()[::-1]

    def to_array(self) -> npt.NDArray[np.uint8]:
        """Coordinates as a uint8 array, coordinate 0 first."""
        nbytes = (self.length + 7) // 8
        raw = np.frombuffer(self.value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length].copy()


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of f : {0,1}^n -> {0,1}, an input string of length N = 2^n.

    Attributes:
        n: Domain bit-count.
        table: Bit string of length 2^n; position x holds f(x).
    """

    n: int
    table: BitString

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"BooleanFunction needs n >= 1, got {self.n}")
        if self.table.length != 1 << self.n:
            raise ValueError(
                f"Truth table length {self.table.length} does not match 2^{self.n}"
            )

    @classmethod
    def from_array(cls, values: Sequence[int] | npt.NDArray[np.integer]) -> "BooleanFunction":
        table = BitString.from_bits(np.asarray(values, dtype=np.uint8))
        return cls(_log2_exact(table.length), table)

    @classmethod
    def from_table(cls, table: str) -> "BooleanFunction":
        bits = BitString.from_table(table)
        return cls(_log2_exact(bits.length), bits)

    @classmethod
    def constant(cls, n: int, bit: int) -> "BooleanFunction":
        size = 1 << n
        return cls(n, BitString.ones(size) if bit else BitString.zeros(size))

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, x: int) -> int:
        return self.table[x]

    @cached_property
    def values(self) -> npt.NDArray[np.uint8]:
        """Truth table as a read-only uint8 array indexed by x."""
        arr = self.table.to_array()
        arr.setflags(write=False)
        return arr

    def to_table(self) -> str:
        return self.table.to_table()


@dataclass(frozen=True)
class Basis:
    """Linearly independent vectors kept in reduced echelon form.

    Every vector has a distinct leading index ``i_j = min{i : z_j[i] = 1}`` and
    every other vector is zero at that coordinate. Construct through
    :func:`utils.f2_utils.rank_extend`; direct construction validates.

    Attributes:
        n: Ambient dimension.
        vectors: Basis vectors in insertion order.
    """

    n: int
    vectors: tuple[BitString, ...] = ()

    def __post_init__(self) -> None:
        for v in self.vectors:
            if v.length != self.n:
                raise ValueError(f"Basis vector length {v.length} != ambient dimension {self.n}")
            if v.is_zero:
                raise ValueError("Basis cannot contain the zero vector")
        leading = self.leading
        if len(set(leading)) != len(leading):
            raise ValueError(f"Leading indices are not distinct: {leading}")
        pivot_mask = sum(1 << i for i in leading)
        for v, i in zip(self.vectors, leading, strict=True):
            if (v.value & pivot_mask) != (1 << i):
                raise ValueError(f"Vector {v} is not reduced against the other leading indices")

    @classmethod
    def empty(cls, n: int) -> "Basis":
        return cls(n, ())

    @property
    def k(self) -> int:
        return len(self.vectors)

    @property
    def leading(self) -> tuple[int, ...]:
        return tuple(v.leading_index for v in self.vectors)

    @property
    def pivot_mask(self) -> int:
        return sum(1 << i for i in self.leading)

    def __iter__(self) -> Iterator[BitString]:
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def labels(self) -> list[str]:
        return [v.to_label() for v in self.vectors]


def _check_binary(text: str) -> None:
    if any(ch not in "01" for ch in text):
        raise ValueError(f"Expected a string over {{0,1}}, got {text!r}")


def _check_same_length(a: BitString, b: BitString) -> None:
    if a.length != b.length:
        raise ValueError(f"Length mismatch: {a.length} != {b.length}")


def _log2_exact(size: int) -> int:
    if size < 2 or size & (size - 1):
        raise ValueError(f"Truth table length must be a power of two >= 2, got {size}")
    return size.bit_length() - 1
