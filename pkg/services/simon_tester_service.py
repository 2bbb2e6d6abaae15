"""The Simon-invariance language and its quantum tester.

``L = {f : {0,1}^n -> {0,1} | exists s != 0 with f(x) = f(x ⊕ s) for all x}``.

This module provides exact membership and distance oracles for L, the
subroutine Q circuit together with its closed-form output state, the coset
analysis of that state, the repeat-until-nonzero main program with an exact
acceptance-probability mode for small n, and the two input distributions
(paired and uniform) used to argue classical hardness.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from models.bits import Basis, BitString, BooleanFunction
from models.property_spec import PropertySpec
from models.tester import QueryRecord, SimonOutcome, Verdict
from services.hadamard_tester_service import QueryOracle
from services.qsim_service import QuantumState
from utils.f2_utils import (
    basis_of,
    enumerate_reduced_bases,
    fwht,
    orthogonal_space,
    parity_array,
    rank_extend,
    span,
)

logger = logging.getLogger(__name__)

# Outcome probabilities at or below this are rounding noise; real ones are >= 1/N^2.
PROBABILITY_FLOOR = 1e-12

EXACT_MAX_N = 3


def _check_basis(f: BooleanFunction, basis: Basis) -> None:
    if basis.n != f.n:
        raise ValueError(f"Basis over {basis.n} bits does not match function over {f.n} bits")


# Membership and distance


def n_s(f: BooleanFunction, s: BitString) -> int:
    """``|{x : f(x) = f(x ⊕ s)}|`` by a full scan.

    Examples:
        >>> n_s(BooleanFunction.from_table("0001"), BitString.from_label("01"))
        2
    """
    if s.length != f.n:
        raise ValueError(f"Shift must have {f.n} bits, got {s.length}")
    xs = np.arange(f.size)
    return int(np.count_nonzero(f.values == f.values[xs ^ s.value]))


def agreement_counts(f: BooleanFunction) -> npt.NDArray[np.int64]:
    """``n_s`` for every s at once, indexed by the integer s.

    Uses the autocorrelation of ``(-1)^f``: with ``C = H(H(g)^2) / N``,
    ``n_s = (N + C(s)) / 2``.
    """
    signs = 1.0 - 2.0 * f.values.astype(np.float64)
    spectrum = fwht(signs)
    autocorrelation = fwht(spectrum * spectrum) / f.size
    return ((f.size + np.rint(autocorrelation).astype(np.int64)) // 2).astype(np.int64)


def is_member(f: BooleanFunction) -> bool:
    return bool(np.any(agreement_counts(f)[1:] == f.size))


def distance_to_L(f: BooleanFunction) -> int:  # noqa: N802
    """Exact Hamming distance from f to L.

    For a fixed s the cheapest s-invariant repair flips one point of every
    disagreeing pair, costing ``(N - n_s) / 2``.
    """
    counts = agreement_counts(f)[1:]
    return int((f.size - counts.max()) // 2)


@dataclass(frozen=True)
class PromiseSet:
    """Invariance subspace S of f and its orthogonal complement.

    Attributes:
        S: Reduced basis of ``{s : f(x) = f(x ⊕ s) for all x}``.
        S_perp: Reduced basis of ``{z : z . s = 0 for all s in S}``.
    """

    S: Basis
    S_perp: Basis

    def __post_init__(self) -> None:
        if self.S.k + self.S_perp.k != self.S.n:
            raise RuntimeError(
                f"dim S ({self.S.k}) + dim S_perp ({self.S_perp.k}) != n ({self.S.n})"
            )

    @property
    def is_trivial(self) -> bool:
        return self.S.k == 0


def promise_set(f: BooleanFunction) -> PromiseSet:
    """Collect every invariance shift of f as a subspace.

    Raises:
        RuntimeError: If the shifts found do not form a subspace.
    """
    counts = agreement_counts(f)
    shifts = [BitString(int(s), f.n) for s in np.flatnonzero(counts == f.size)]
    S = basis_of(shifts, f.n)
    if len(span(S)) != len(shifts):
        raise RuntimeError(f"Invariance shifts of f are not closed under XOR: {len(shifts)} found")
    return PromiseSet(S=S, S_perp=orthogonal_space(list(S.vectors), f.n))


def enumerate_language(n: int) -> Iterator[BooleanFunction]:
    """Every member of L over n bits, each once (n <= 4).

    Raises:
        ValueError: If n is outside 1..4.
    """
    if not 1 <= n <= 4:
        raise ValueError(f"Exhaustive enumeration of L supports 1 <= n <= 4, got {n}")
    size = 1 << n
    xs = np.arange(size)
    seen: set[int] = set()
    for s in range(1, size):
        representatives = np.flatnonzero(xs < (xs ^ s))
        owner = np.minimum(xs, xs ^ s)
        slot = np.searchsorted(representatives, owner)
        for pattern in range(1 << representatives.size):
            bits = (pattern >> np.arange(representatives.size)) & 1
            f = BooleanFunction.from_array(bits[slot])
            if f.table.value not in seen:
                seen.add(f.table.value)
                yield f


@dataclass(frozen=True)
class SimonLanguage:
    """The language L over n-bit domains, inputs of length N = 2^n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"L needs n >= 1, got {self.n}")

    @property
    def size(self) -> int:
        return 1 << self.n

    def contains(self, f: BooleanFunction) -> bool:
        return is_member(f)

    def distance(self, f: BooleanFunction) -> int:
        return distance_to_L(f)

    def as_property(self) -> PropertySpec:
        return simon_property(self.n)


def simon_property(n: int) -> PropertySpec:
    """L as a :class:`PropertySpec` over truth tables of length ``2^n``."""
    return PropertySpec(
        name="simon",
        length=1 << n,
        contains=lambda x: is_member(BooleanFunction(n, x)),
        distance=lambda x: distance_to_L(BooleanFunction(n, x)),
        sample_member=lambda rng: sample_P(n, rng).f.table,
    )


# Subroutine Q


def prepare_q_state(
    f: BooleanFunction, basis: Basis, oracle: QueryOracle | None = None
) -> QuantumState:
    """Run the subroutine Q circuit up to (not including) the measurement.

    ``H`` on X, one oracle call, ``H`` on X, then for every basis vector
    ``z_j`` with leading index ``i_j``: CNOT from X qubit ``i_j`` into Z qubit
    ``j``, XOR ``z_j`` into X where Z qubit ``j`` is set, Hadamard on Z qubit ``j``.

    Args:
        f: The function being tested.
        basis: Reduced basis found so far.
        oracle: When given, the oracle call is logged on it.
    """
    _check_basis(f, basis)
    state = QuantumState.init(f.n, basis.k).hadamard_x()
    if oracle is not None:
        oracle.invoke(state)
    else:
        state.oracle_xor(f)
    state.hadamard_x()
    for j, z in enumerate(basis.vectors):
        state.cnot_x_to_z(z.leading_index, j)
        state.xor_x_conditional(z, j)
        state.hadamard_z(j)
    return state


def subroutine_Q(  # noqa: N802
    f: BooleanFunction,
    basis: Basis,
    rng: np.random.Generator,
    oracle: QueryOracle | None = None,
) -> BitString:
    """One run of subroutine Q: one oracle invocation, then measure X."""
    state = prepare_q_state(f, basis, oracle if oracle is not None else QueryOracle(f.table))
    z, _ = state.measure_x(rng)
    return z


def coset_labels(basis: Basis) -> npt.NDArray[np.int64]:
    """``c(x)`` for every x: bit j is ``x . z_j``."""
    xs = np.arange(1 << basis.n, dtype=np.int64)
    labels = np.zeros_like(xs)
    for j, z in enumerate(basis.vectors):
        labels |= parity_array(xs & z.value).astype(np.int64) << j
    return labels


def closed_form_state(f: BooleanFunction, basis: Basis) -> QuantumState:
    """Pre-measurement state of subroutine Q, evaluated from its closed form.

    ``sqrt(2^k)/N * sum_x sum_{y : y[i_j] = 0 for all j} (-1)^{x.y} |y>|f(x)>|c(x)>``,
    summed with an explicit sign matrix rather than through the circuit.
    """
    _check_basis(f, basis)
    size = f.size
    xs = np.arange(size, dtype=np.int64)
    signs = 1.0 - 2.0 * parity_array(np.bitwise_and.outer(xs, xs)).astype(np.float64)

    indicator = np.zeros((size, 2, 1 << basis.k), dtype=np.float64)
    indicator[xs, f.values, coset_labels(basis)] = 1.0

    amp = np.einsum("xy,xbc->ybc", signs, indicator).astype(np.complex128)
    amp[(xs & basis.pivot_mask) != 0] = 0.0
    amp *= math.sqrt(1 << basis.k) / size
    return QuantumState(f.n, basis.k, amp)


# Coset analysis


@dataclass(frozen=True)
class CosetPartition:
    """The cosets ``D_c = {x : x . z_j = c[j] for all j}`` of a basis.

    Attributes:
        basis: The basis z_1..z_k.
        labels: ``c(x)`` for every x.
    """

    basis: Basis
    labels: npt.NDArray[np.int64] = field(repr=False)

    def __post_init__(self) -> None:
        sizes = np.bincount(self.labels, minlength=1 << self.basis.k)
        expected = (1 << self.basis.n) >> self.basis.k
        if np.any(sizes != expected):
            raise ValueError(f"Coset sizes {sizes.tolist()} are not all {expected}")

    @cached_property
    def cosets(self) -> dict[int, npt.NDArray[np.int64]]:
        return {c: np.flatnonzero(self.labels == c) for c in range(1 << self.basis.k)}

    def coset(self, c: int) -> npt.NDArray[np.int64]:
        if not 0 <= c < 1 << self.basis.k:
            raise ValueError(f"Coset label {c} out of range for k={self.basis.k}")
        return self.cosets[c]

    @property
    def coset_size(self) -> int:
        return (1 << self.basis.n) >> self.basis.k


def coset_partition(basis: Basis) -> CosetPartition:
    return CosetPartition(basis=basis, labels=coset_labels(basis))


def _coset_counts(f: BooleanFunction, basis: Basis) -> npt.NDArray[np.int64]:
    """``|D_{b,c}|``: points of coset c where f equals b, shape ``(2, 2^k)``."""
    _check_basis(f, basis)
    labels = coset_labels(basis)
    flat = np.bincount(f.values.astype(np.int64) * (1 << basis.k) + labels, minlength=2 << basis.k)
    return flat.reshape(2, 1 << basis.k)


def is_coset_constant(f: BooleanFunction, basis: Basis) -> bool:
    """True iff f is constant on every coset D_c."""
    counts = _coset_counts(f, basis)
    return bool(np.all(np.min(counts, axis=0) == 0))


def zero_outcome_probability(f: BooleanFunction, basis: Basis) -> float:
    """Probability that subroutine Q measures ``0^n``: ``2^k / N^2 * sum |D_{b,c}|^2``."""
    counts = _coset_counts(f, basis).astype(np.float64)
    return float((1 << basis.k) * np.sum(counts**2) / f.size**2)


def majority_repair(f: BooleanFunction, basis: Basis) -> BooleanFunction:
    """Coset-constant function closest to f: each coset takes its majority value (ties to 0)."""
    counts = _coset_counts(f, basis)
    majority = (counts[1] > counts[0]).astype(np.uint8)
    return BooleanFunction.from_array(majority[coset_labels(basis)])


def minimal_coset_constant_dimension(f: BooleanFunction) -> tuple[int, Basis]:
    """Smallest k such that f is constant on the cosets of some k-vector basis.

    Brute force over one reduced basis per subspace, in order of dimension.
    """
    for basis in enumerate_reduced_bases(f.n):
        if is_coset_constant(f, basis):
            return basis.k, basis
    raise RuntimeError("No coset-constant basis found; the full basis always qualifies")


# Main program


def repetition_limit(n: int, epsilon: float, multiplier: float = 2.0) -> int:
    """Repetitions per basis size: ``max(1, ceil(multiplier * log2(n) / epsilon^2))``.

    Examples:
        >>> repetition_limit(4, 1 / 8)
        256
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return max(1, math.ceil(round(multiplier * math.log2(n) / epsilon**2, 9)))


def _check_extension(
    basis: Basis, z: BitString, promise: PromiseSet | None
) -> Basis:
    """Extend ``basis`` by a measured nonzero z, enforcing what Q guarantees.

    Raises:
        RuntimeError: If z is dependent, clashes with an existing leading index,
            or is not orthogonal to a known invariance shift.
    """
    if z.value & basis.pivot_mask:
        raise RuntimeError(f"Measured {z} is nonzero at an existing leading index {basis.leading}")
    extended = rank_extend(basis, z)
    if extended is None:
        raise RuntimeError(f"Measured {z} is dependent on the basis {basis.labels()}")
    if promise is not None:
        for s in promise.S.vectors:
            if (z.value & s.value).bit_count() & 1:
                raise RuntimeError(f"Measured {z} is not orthogonal to invariance shift {s}")
    return extended


def main_program(
    f: BooleanFunction,
    epsilon: float,
    rng: np.random.Generator,
    repetition_multiplier: float = 2.0,
    reuse_prepared_state: bool = True,
    promise: PromiseSet | None = None,
) -> SimonOutcome:
    """Quantum tester for L.

    For k = 0, 1, ...: repeat subroutine Q (with the current basis) up to
    ``repetition_limit`` times until the outcome is nonzero. If every
    repetition yields ``0^n``, accept. Otherwise add the nonzero outcome to the
    basis; once the basis spans all n dimensions, reject.

    Args:
        f: Function under test.
        epsilon: Distance parameter.
        rng: Measurement randomness.
        repetition_multiplier: Constant in the repetition limit.
        reuse_prepared_state: Prepare Q's state once per basis and sample the
            repetitions from its outcome distribution (same law, fewer
            simulations); when off, every repetition re-runs the circuit.
        promise: Invariance subspace of f, when known, for checking
            orthogonality of every measured z.

    Returns:
        Outcome whose query count is the number of oracle invocations.

    Raises:
        RuntimeError: If a measured nonzero z fails the extension checks.
    """
    limit = repetition_limit(f.n, epsilon, repetition_multiplier)
    oracle = QueryOracle(f.table)
    basis = Basis.empty(f.n)

    while basis.k < f.n:
        if reuse_prepared_state:
            probs = prepare_q_state(f, basis).x_distribution().normalized(PROBABILITY_FLOOR)
            draws = rng.choice(probs.size, size=limit, p=probs)
            nonzero = np.flatnonzero(draws)
            used = limit if nonzero.size == 0 else int(nonzero[0]) + 1
            oracle.record_invocations(used)
            z = BitString(int(draws[nonzero[0]]), f.n) if nonzero.size else None
        else:
            z = None
            for _ in range(limit):
                measured = subroutine_Q(f, basis, rng, oracle)
                if not measured.is_zero:
                    z = measured
                    break

        if z is None:
            logger.debug(f"main_program: {limit} zero outcomes at k={basis.k}; accepting")
            return _simon_outcome("accept", oracle, basis, limit)
        basis = _check_extension(basis, z, promise)
        logger.debug(f"main_program: extended basis with {z} (k={basis.k})")

    return _simon_outcome("reject", oracle, basis, 0)


def _simon_outcome(
    verdict: Verdict, oracle: QueryOracle, basis: Basis, zero_streak: int
) -> SimonOutcome:
    transcript: tuple[QueryRecord, ...] = oracle.transcript
    return SimonOutcome(
        verdict=verdict,
        queries=len(transcript),
        transcript=transcript,
        basis=tuple(basis.labels()),
        zero_streak=zero_streak,
        detail=f"basis dimension {basis.k}",
    )


def acceptance_probability(
    f: BooleanFunction,
    epsilon: float,
    repetition_multiplier: float = 2.0,
    max_n: int = EXACT_MAX_N,
) -> float:
    """Exact acceptance probability of :func:`main_program` by branching on outcomes.

    With ``p0`` the zero-outcome probability at the current basis and ``L`` the
    repetition limit, the run accepts there with probability ``p0^L``;
    otherwise the first nonzero outcome is z with probability
    ``p(z) (1 - p0^L) / (1 - p0)`` and the run continues from the extended basis.

    Raises:
        ValueError: If ``f.n`` exceeds ``max_n``.
    """
    if f.n > max_n:
        raise ValueError(f"Exact acceptance analysis supports n <= {max_n}, got n={f.n}")
    limit = repetition_limit(f.n, epsilon, repetition_multiplier)
    memo: dict[tuple[int, ...], float] = {}

    def accept_from(basis: Basis) -> float:
        if basis.k == f.n:
            return 0.0
        key = tuple(sorted(v.value for v in basis.vectors))
        if key in memo:
            return memo[key]
        probs = prepare_q_state(f, basis).x_distribution().normalized(PROBABILITY_FLOOR)
        p0 = float(probs[0])
        stay = p0**limit
        total = stay
        if p0 < 1.0:
            scale = (1.0 - stay) / (1.0 - p0)
            for z in np.flatnonzero(probs[1:]) + 1:
                extended = rank_extend(basis, BitString(int(z), f.n))
                if extended is None:
                    raise RuntimeError(f"Outcome {int(z)} is dependent on basis {basis.labels()}")
                total += float(probs[z]) * scale * accept_from(extended)
        memo[key] = total
        return total

    return accept_from(Basis.empty(f.n))


# Input distributions


@dataclass(frozen=True)
class PairedSample:
    """A draw from the paired distribution: a hidden shift and an s-invariant function.

    Attributes:
        s: Nonzero shift.
        f: Function with ``f(x) = f(x ⊕ s)`` for all x.
    """

    s: BitString
    f: BooleanFunction

    def __post_init__(self) -> None:
        if self.s.is_zero:
            raise ValueError("Paired sample needs a nonzero shift")
        if n_s(self.f, self.s) != self.f.size:
            raise ValueError(f"Function is not invariant under shift {self.s}")


def sample_P(n: int, rng: np.random.Generator) -> PairedSample:  # noqa: N802
    """Uniform nonzero s, then one uniform bit per pair ``{x, x ⊕ s}``."""
    size = 1 << n
    s = int(rng.integers(1, size))
    bits = rng.integers(0, 2, size=size, dtype=np.uint8)
    xs = np.arange(size)
    table = bits[np.minimum(xs, xs ^ s)]
    return PairedSample(s=BitString(s, n), f=BooleanFunction.from_array(table))


def sample_U(n: int, rng: np.random.Generator) -> BooleanFunction:  # noqa: N802
    """Uniformly random function on n bits."""
    return BooleanFunction.from_array(rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def high_agreement_rate(
    n: int, samples: int, rng: np.random.Generator, fraction: float = 7 / 8
) -> float:
    """Fraction of uniform functions with ``n_s >= fraction * N`` for some ``s != 0``.

    Raises:
        ValueError: If samples < 1 or fraction is outside (0, 1].
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    threshold = fraction * (1 << n)
    hits = sum(
        1 for _ in range(samples) if agreement_counts(sample_U(n, rng))[1:].max() >= threshold
    )
    return hits / samples


def sample_far_function(
    n: int, min_distance: int, rng: np.random.Generator, max_attempts: int = 10_000
) -> BooleanFunction:
    """Uniform function with ``distance_to_L >= min_distance`` by rejection sampling.

    Raises:
        RuntimeError: If none is found within ``max_attempts`` draws.
    """
    for _ in range(max_attempts):
        f = sample_U(n, rng)
        if distance_to_L(f) >= min_distance:
            return f
    logger.warning(f"No function at distance >= {min_distance} in {max_attempts} draws (n={n})")
    raise RuntimeError(f"Could not sample a function at distance >= {min_distance} from L")
