"""Tests for the PropertySpec oracle bundle."""

import numpy as np
import pytest

from models.bits import BitString
from models.property_spec import PropertySpec


@pytest.fixture
def repetition() -> PropertySpec:
    """The two constant strings of length 4."""
    members = (BitString(0b0000, 4), BitString(0b1111, 4))
    return PropertySpec(
        name="repetition",
        length=4,
        contains=lambda x: x in members,
        distance=lambda x: min(x.weight, 4 - x.weight),
        sample_member=lambda rng: members[int(rng.integers(2))],
    )


class TestPropertySpec:
    """Tests for the far check and input validation."""

    @pytest.mark.parametrize(
        ("value", "epsilon", "expected"),
        [(0b0000, 0.1, False), (0b0001, 0.25, False), (0b0001, 0.2, True), (0b0011, 0.4, True)],
    )
    def test_is_far(self, repetition: PropertySpec, value: int, epsilon: float, expected: bool) -> None:
        assert repetition.is_far(BitString(value, 4), epsilon) is expected

    def test_wrong_length(self, repetition: PropertySpec) -> None:
        with pytest.raises(ValueError, match="expects 4-bit inputs"):
            repetition.is_far(BitString(0, 3), 0.1)

    def test_sampled_members_are_contained(self, repetition: PropertySpec) -> None:
        rng = np.random.default_rng(3)
        assert all(repetition.contains(repetition.sample_member(rng)) for _ in range(10))
