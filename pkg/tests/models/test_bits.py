"""Tests for BitString, BooleanFunction and Basis."""

import numpy as np
import pytest

from models.bits import Basis, BitString, BooleanFunction


class TestBitStringForms:
    """Tests for the label and table text forms."""

    def test_label_is_most_significant_first(self) -> None:
        # Act
        b = BitString.from_label("0011")

        # Assert
        assert b.value == 3
        assert b[0] == 1
        assert b[3] == 0
        assert str(b) == "0011"

    def test_table_is_coordinate_zero_first(self) -> None:
        # Act
        b = BitString.from_table("1100")

        # Assert
        assert b.value == 3
        assert b.to_table() == "1100"
        assert b.to_label() == "0011"

    def test_from_bits_matches_to_array(self) -> None:
        # Arrange
        bits = [1, 0, 1, 1, 0, 0, 0, 0, 1]

        # Act
        b = BitString.from_bits(bits)

        # Assert
        assert b.length == 9
        assert b.to_array().tolist() == bits

    def test_empty_string(self) -> None:
        # Act
        b = BitString.from_label("")

        # Assert
        assert b.length == 0
        assert b.to_label() == ""

    @pytest.mark.parametrize("text", ["012", "ab", "1 0"])
    def test_non_binary_rejected(self, text: str) -> None:
        with pytest.raises(ValueError, match="over"):
            BitString.from_label(text)

    def test_value_must_fit(self) -> None:
        with pytest.raises(ValueError, match="does not fit"):
            BitString(8, 3)


class TestBitStringOperations:
    """Tests for arithmetic and inspection helpers."""

    def test_xor_and_weight(self) -> None:
        # Arrange
        a = BitString.from_label("1100")
        b = BitString.from_label("1010")

        # Act
        c = a ^ b

        # Assert
        assert c.to_label() == "0110"
        assert c.weight == 2

    def test_xor_length_mismatch(self) -> None:
        with pytest.raises(ValueError, match="Length mismatch"):
            _ = BitString(1, 2) ^ BitString(1, 3)

    def test_leading_index_is_lowest_set_coordinate(self) -> None:
        assert BitString.from_label("0110").leading_index == 1
        assert BitString.from_label("1000").leading_index == 3

    def test_leading_index_of_zero_raises(self) -> None:
        with pytest.raises(ValueError, match="Zero vector"):
            _ = BitString.zeros(3).leading_index

    def test_flip_and_index_bounds(self) -> None:
        # Arrange
        b = BitString.zeros(4)

        # Act
        flipped = b.flip(2)

        # Assert
        assert flipped.value == 4
        with pytest.raises(IndexError):
            b.flip(4)
        with pytest.raises(IndexError):
            _ = b[-1]

    def test_ones(self) -> None:
        assert BitString.ones(5).weight == 5


class TestBooleanFunction:
    """Tests for truth tables."""

    def test_call_reads_position(self) -> None:
        # Arrange
        f = BooleanFunction.from_table("0110")

        # Assert
        assert f.n == 2
        assert [f(x) for x in range(4)] == [0, 1, 1, 0]

    def test_values_read_only(self) -> None:
        # Arrange
        f = BooleanFunction.from_array([1, 0, 0, 1])

        # Act & Assert
        assert f.values.tolist() == [1, 0, 0, 1]
        with pytest.raises(ValueError):
            f.values[0] = 0

    def test_constant(self) -> None:
        assert BooleanFunction.constant(3, 1).table.weight == 8
        assert BooleanFunction.constant(3, 0).table.is_zero

    @pytest.mark.parametrize("table", ["0", "011", "011001"])
    def test_length_must_be_power_of_two(self, table: str) -> None:
        with pytest.raises(ValueError, match="power of two"):
            BooleanFunction.from_table(table)

    def test_table_length_must_match_n(self) -> None:
        with pytest.raises(ValueError, match="does not match"):
            BooleanFunction(3, BitString.zeros(4))

    def test_from_array_accepts_numpy(self) -> None:
        f = BooleanFunction.from_array(np.array([0, 1, 1, 1, 0, 0, 0, 1], dtype=np.int64))
        assert f.to_table() == "01110001"


class TestBasis:
    """Tests for reduced-echelon validation."""

    def test_valid_reduced_basis(self) -> None:
        # Arrange
        z1 = BitString.from_label("101")  # leading 0
        z2 = BitString.from_label("110")  # leading 1

        # Act
        basis = Basis(3, (z1, z2))

        # Assert
        assert basis.k == 2
        assert basis.leading == (0, 1)
        assert basis.pivot_mask == 0b011
        assert basis.labels() == ["101", "110"]

    def test_unreduced_vector_rejected(self) -> None:
        # 011 has a 1 at the leading index of 010
        with pytest.raises(ValueError, match="not reduced"):
            Basis(3, (BitString.from_label("010"), BitString.from_label("011")))

    def test_duplicate_leading_rejected(self) -> None:
        with pytest.raises(ValueError, match="Leading indices"):
            Basis(3, (BitString.from_label("001"), BitString.from_label("101")))

    def test_zero_vector_rejected(self) -> None:
        with pytest.raises(ValueError, match="zero vector"):
            Basis(2, (BitString.zeros(2),))

    def test_length_mismatch_rejected(self) -> None:
        with pytest.raises(ValueError, match="ambient dimension"):
            Basis(3, (BitString.from_label("01"),))

    def test_empty(self) -> None:
        assert len(Basis.empty(4)) == 0
        assert Basis.empty(4).pivot_mask == 0
