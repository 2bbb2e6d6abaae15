"""Arithmetic in GF(2^k) through exp/log tables of a primitive element.

Elements are integers in ``[0, 2^k)`` whose bits are polynomial coefficients
over F_2. The field is fixed by a primitive polynomial from
``PRIMITIVE_POLYNOMIALS``; ``alpha`` (the class of x) generates the
multiplicative group.
"""

import logging
from functools import cache

import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

# Primitive polynomials, bit i = coefficient of x^i (degree 3: x^3 + x + 1 = 0b1011).
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


def clmul_mod(a: int, b: int, modulus: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo ``modulus``.

    Reference multiply used to cross-check the tables.

    Examples:
        >>> clmul_mod(0b010, 0b100, 0b1011)  # x * x^2 = x^3 = x + 1
        3
    """
    k = modulus.bit_length() - 1
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if (a >> k) & 1:
            a ^= modulus
    return result


class GF2k:
    """The field GF(2^k) for ``1 <= k <= 16``.

    Attributes:
        k: Field degree.
        modulus: Primitive polynomial defining the field.
        order: Number of elements, ``2^k``.
    """

    def __init__(self, k: int, modulus: int | None = None) -> None:
        """Build exp/log tables.

        Args:
            k: Field degree.
            modulus: Degree-k polynomial; defaults to the table entry for k.

        Raises:
            ValueError: If k has no table entry or the modulus is not primitive.
        """
        if modulus is None:
            if k not in PRIMITIVE_POLYNOMIALS:
                raise ValueError(f"No primitive polynomial for k={k}; supported 1..16")
            modulus = PRIMITIVE_POLYNOMIALS[k]
        if modulus.bit_length() - 1 != k:
            raise ValueError(f"Modulus {modulus:#b} does not have degree {k}")

        self.k = k
        self.modulus = modulus
        self.order = 1 << k
        group = self.order - 1

        exp = np.zeros(2 * group, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        value = 1
        for i in range(group):
            if log[value] != -1:
                raise ValueError(f"Modulus {modulus:#b} is not primitive for k={k}")
            exp[i] = value
            log[value] = i
            value <<= 1
            if value >> k:
                value ^= modulus
        if value != 1:
            raise ValueError(f"Modulus {modulus:#b} is not primitive for k={k}")
        exp[group:] = exp[:group]

        self._exp = exp
        self._log = log
        logger.debug(f"Built GF(2^{k}) tables for modulus {modulus:#b}")

    def __repr__(self) -> str:
        return f"GF2k(k={self.k}, modulus={self.modulus:#b})"

    @property
    def alpha(self) -> int:
        return int(self._exp[1 % (self.order - 1)])

    def _check(self, a: int) -> None:
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of GF(2^{self.k})")

    def add(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        """Multiplicative inverse.

        Raises:
            ZeroDivisionError: If ``a`` is zero.
        """
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^k)")
        group = self.order - 1
        return int(self._exp[(group - self._log[a]) % group])

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no negative powers")
            return 1 if e == 0 else 0
        group = self.order - 1
        return int(self._exp[(self._log[a] * e) % group])

    def alpha_pow(self, e: int) -> int:
        """``alpha^e`` for any integer exponent."""
        return int(self._exp[e % (self.order - 1)])

    def elements(self) -> npt.NDArray[np.int64]:
        return np.arange(self.order, dtype=np.int64)

    def mul_array(self, a: npt.NDArray[np.int64], b: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
        """Element-wise product of two arrays of field elements."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        nonzero = (a != 0) & (b != 0)
        la = np.where(nonzero, self._log[a], 0)
        lb = np.where(nonzero, self._log[b], 0)
        return np.where(nonzero, self._exp[la + lb], 0)


@cache
def get_field(k: int) -> GF2k:
    """Shared field instance per degree."""
    return GF2k(k)
