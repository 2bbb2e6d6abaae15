"""A small d-wise independent sample space and the property it spans.

Seeds ``z`` are bit vectors of length ``1 + t k``. Position ``i`` in
``1..n`` with ``n = 2^k - 1`` owns the column
``(1, a_i, a_i^3, ..., a_i^(2t-1))`` over GF(2^k), flattened to bits, where
``a_i = alpha^(i-1)``. The random variable ``xi_i(z)`` is the F_2 inner
product of z with column i; any ``d = 2t + 1`` of them are jointly uniform
over the ``2^(1 + t k) = 2 (n + 1)^t`` seeds.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from models.bits import BitString
from models.property_spec import PropertySpec
from utils.f2_utils import parity_array
from utils.gf2k_utils import get_field

logger = logging.getLogger(__name__)

MAX_PROPERTY_LENGTH = 20
MAX_VERIFY_LENGTH = 15
MAX_VERIFY_DEGREE = 6
MAX_SEED_BITS = 24


@dataclass(frozen=True)
class DWiseSpace:
    """Sample space built from GF(2^k) with ``t`` odd powers per column.

    Attributes:
        k: Field degree; the strings have length ``n = 2^k - 1``.
        t: Number of odd powers; independence ``d = 2t + 1``.
    """

    k: int
    t: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= 16:
            raise ValueError(f"k must be in 1..16, got {self.k}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if self.seed_bits > MAX_SEED_BITS:
            raise ValueError(
                f"Seed length 1 + t*k = {self.seed_bits} exceeds {MAX_SEED_BITS} bits"
            )

    @property
    def n(self) -> int:
        return (1 << self.k) - 1

    @property
    def d(self) -> int:
        return 2 * self.t + 1

    @property
    def seed_bits(self) -> int:
        return 1 + self.t * self.k

    @property
    def size(self) -> int:
        """``|Omega| = 2^(1 + t k)``."""
        return 1 << self.seed_bits

    @cached_property
    def columns(self) -> npt.NDArray[np.int64]:
        """Packed column of every position; entry ``i - 1`` belongs to position i.

        Bit 0 is the constant 1; bits ``1 + e k .. e k + k`` hold ``a_i^(2e+1)``.
        """
        field = get_field(self.k)
        cols = np.ones(self.n, dtype=np.int64)
        for i in range(1, self.n + 1):
            for e in range(self.t):
                element = field.alpha_pow((i - 1) * (2 * e + 1))
                cols[i - 1] |= element << (1 + e * self.k)
        if np.unique(cols).size != self.n:
            raise RuntimeError(f"Columns of {self} are not distinct")
        return cols

    @cached_property
    def matrix(self) -> npt.NDArray[np.uint8]:
        """``xi_i(z)`` for every seed (rows) and position (columns)."""
        seeds = np.arange(self.size, dtype=np.int64)
        return parity_array(seeds[:, None] & self.columns[None, :])

    def string(self, z: int) -> BitString:
        """The n-bit string ``xi_1(z) ... xi_n(z)``, position i at coordinate i - 1."""
        self._check_seed(z)
        return BitString.from_bits(parity_array(self.columns & z))

    def _check_seed(self, z: int) -> None:
        if not 0 <= z < self.size:
            raise ValueError(f"Seed {z} out of range for |Omega| = {self.size}")


def xi(space: DWiseSpace, z: int, i: int) -> int:
    """``xi_i(z)``, positions numbered from 1.

    Raises:
        ValueError: If z or i is out of range.
    """
    space._check_seed(z)
    if not 1 <= i <= space.n:
        raise ValueError(f"Position {i} out of range 1..{space.n}")
    return (int(space.columns[i - 1]) & z).bit_count() & 1


def property_members(space: DWiseSpace, max_length: int = MAX_PROPERTY_LENGTH) -> list[BitString]:
    """Distinct strings ``xi(z)``, sorted by value.

    Raises:
        ValueError: If n exceeds ``max_length``.
    """
    if space.n > max_length:
        raise ValueError(f"Property materialization supports n <= {max_length}, got {space.n}")
    weights = np.left_shift(1, np.arange(space.n, dtype=np.int64))
    values = np.unique(space.matrix.astype(np.int64) @ weights)
    return [BitString(int(v), space.n) for v in values]


def enumerate_property(space: DWiseSpace, max_length: int = MAX_PROPERTY_LENGTH) -> PropertySpec:
    """``P = {xi(z) : z in Omega}`` with an exact distance oracle by enumeration."""
    members = property_members(space, max_length)
    values = np.array([m.value for m in members], dtype=np.uint64)
    member_set = {m.value for m in members}
    logger.info(f"Materialized d-wise property: n={space.n}, {len(members)} members, |Omega|={space.size}")

    def distance(x: BitString) -> int:
        return int(np.bitwise_count(values ^ np.uint64(x.value)).min())

    return PropertySpec(
        name="dwise",
        length=space.n,
        contains=lambda x: x.value in member_set,
        distance=distance,
        sample_member=lambda rng: space.string(int(rng.integers(space.size))),
    )


def write_property(space: DWiseSpace, path: str | Path, max_length: int = MAX_PROPERTY_LENGTH) -> int:
    """Write every member in table form, one per line; returns the member count."""
    members = property_members(space, max_length)
    Path(path).write_text("".join(f"{m.to_table()}\n" for m in members), encoding="utf-8")
    logger.info(f"Wrote {len(members)} members to {path}")
    return len(members)


class DWiseReport(NamedTuple):
    """Outcome of an exhaustive independence check.

    Attributes:
        passed: True when every subset of at most d positions is uniform.
        d: Degree checked.
        subsets_checked: Number of position subsets examined.
        violation: First non-uniform subset (1-based positions), if any.
        counts: Pattern counts of the violating subset.
    """

    passed: bool
    d: int
    subsets_checked: int
    violation: tuple[int, ...] | None = None
    counts: tuple[int, ...] | None = None


def _check_exhaustive(space: DWiseSpace, d: int, max_length: int, max_degree: int) -> None:
    if space.n > max_length:
        raise ValueError(f"Exhaustive checks support n <= {max_length}, got {space.n}")
    if not 1 <= d <= min(space.n, max_degree):
        raise ValueError(f"d must be in 1..{min(space.n, max_degree)}, got {d}")


def _pattern_counts(matrix: npt.NDArray[np.uint8], subset: tuple[int, ...]) -> npt.NDArray[np.int64]:
    key = np.zeros(matrix.shape[0], dtype=np.int64)
    for bit, position in enumerate(subset):
        key |= matrix[:, position - 1].astype(np.int64) << bit
    return np.bincount(key, minlength=1 << len(subset))


def verify_dwise(
    space: DWiseSpace,
    d: int,
    max_length: int = MAX_VERIFY_LENGTH,
    max_degree: int = MAX_VERIFY_DEGREE,
) -> DWiseReport:
    """Check that every pattern on every set of at most d positions occurs ``|Omega| / 2^r`` times."""
    _check_exhaustive(space, d, max_length, max_degree)
    matrix = space.matrix
    checked = 0
    for r in range(1, d + 1):
        for subset in combinations(range(1, space.n + 1), r):
            checked += 1
            counts = _pattern_counts(matrix, subset)
            if np.any(counts << r != space.size):
                logger.debug(f"verify_dwise: subset {subset} is not uniform")
                return DWiseReport(False, d, checked, subset, tuple(int(c) for c in counts))
    return DWiseReport(True, d, checked)


def classical_lb_witness(
    space: DWiseSpace,
    d: int,
    max_length: int = MAX_VERIFY_LENGTH,
    max_degree: int = MAX_VERIFY_DEGREE,
) -> bool:
    """True iff every d positions admit every value pattern for some seed.

    A classical reader of d positions then sees only answers some member of
    the property could give.
    """
    _check_exhaustive(space, d, max_length, max_degree)
    matrix = space.matrix
    for subset in combinations(range(1, space.n + 1), d):
        if np.any(_pattern_counts(matrix, subset) == 0):
            return False
    return True


@dataclass(frozen=True)
class Monomial:
    """Product of the bits at a set of positions (1-based).

    Attributes:
        indices: Positions multiplied together.
    """

    indices: frozenset[int]

    def __post_init__(self) -> None:
        if any(i < 1 for i in self.indices):
            raise ValueError(f"Monomial positions start at 1, got {sorted(self.indices)}")

    @classmethod
    def of(cls, *indices: int) -> "Monomial":
        return cls(frozenset(indices))

    @property
    def degree(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return "*".join(f"x{i}" for i in sorted(self.indices)) or "1"


class MonomialGap(NamedTuple):
    """Expectation of a monomial over the property and over uniform strings."""

    e_property: Fraction
    e_uniform: Fraction
    gap: Fraction


def monomial_gap(space: DWiseSpace, m: Monomial) -> MonomialGap:
    """Exact expectations of ``m`` over ``{xi(z)}`` (seeds counted with multiplicity) and uniformly.

    Raises:
        ValueError: If a position exceeds n.
    """
    if m.indices and max(m.indices) > space.n:
        raise ValueError(f"Monomial {m} uses a position beyond n={space.n}")
    matrix = space.matrix
    if m.indices:
        hits = int(np.count_nonzero(np.all(matrix[:, [i - 1 for i in sorted(m.indices)]], axis=1)))
    else:
        hits = space.size
    e_property = Fraction(hits, space.size)
    e_uniform = Fraction(1, 1 << m.degree)
    return MonomialGap(e_property, e_uniform, e_property - e_uniform)


def monomials(space: DWiseSpace, degree: int) -> Iterator[Monomial]:
    for subset in combinations(range(1, space.n + 1), degree):
        yield Monomial(frozenset(subset))


def find_nonzero_gap(space: DWiseSpace, degree: int) -> Monomial | None:
    """First monomial of the given degree whose expectation differs from uniform."""
    for m in monomials(space, degree):
        if monomial_gap(space, m).gap != 0:
            return m
    return None


class GapSummary(NamedTuple):
    degree: int
    monomials: int
    nonzero: int
    max_abs_gap: Fraction


def gap_table(space: DWiseSpace, max_degree: int) -> list[GapSummary]:
    """Per-degree count of monomials with nonzero gap, degrees 0..max_degree."""
    if not 0 <= max_degree <= space.n:
        raise ValueError(f"max_degree must be in 0..{space.n}, got {max_degree}")
    rows = []
    for degree in range(max_degree + 1):
        gaps = [monomial_gap(space, m).gap for m in monomials(space, degree)]
        nonzero = sum(1 for g in gaps if g != 0)
        rows.append(GapSummary(degree, len(gaps), nonzero, max((abs(g) for g in gaps), default=Fraction(0))))
    return rows
