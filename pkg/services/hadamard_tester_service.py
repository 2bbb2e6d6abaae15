"""Testers for subsets of the Hadamard code, with exact acceptance analysis.

For ``A ⊆ {0,1}^m`` the property is ``P_A = {h(y) : y in A}`` over strings of
length ``n = 2^m``. Three testers are provided:

- :func:`classical_test_PA` reads the ``m`` positions ``2^i`` to decode a
  candidate y, then spot-checks k random positions against ``h(y)``.
- :func:`quantum_test_PA` runs k BLR linearity rounds and one
  Bernstein-Vazirani query; its cost ``3k + 1`` does not depend on n.
- :func:`generic_test` works for any explicit property of s members with
  ``ceil(c (ln s + 1) / epsilon)`` queries.

All three accept members with probability 1.
"""

import logging
import math
from collections.abc import Collection, Sequence

import numpy as np
import numpy.typing as npt

from models.bits import BitString, BooleanFunction
from models.property_spec import PropertySpec
from models.tester import QueryRecord, TestOutcome, TesterConfig, Verdict
from services.qsim_service import OutcomeDistribution, QuantumState
from utils.f2_utils import (
    distance_to_PA,
    hadamard_decode_candidate,
    hadamard_encode,
    log2_exact,
    parity_array,
    random_bitstring,
    walsh_spectrum,
)

logger = logging.getLogger(__name__)


class QueryOracle:
    """Counting access to an input string.

    Every classical position read and every quantum invocation is appended to
    the transcript, so a tester's query count is read off the log.

    Attributes:
        x: The hidden input.
    """

    def __init__(self, x: BitString) -> None:
        self.x = x
        self._transcript: list[QueryRecord] = []

    @property
    def length(self) -> int:
        return self.x.length

    @property
    def queries(self) -> int:
        return len(self._transcript)

    @property
    def transcript(self) -> tuple[QueryRecord, ...]:
        return tuple(self._transcript)

    def query(self, position: int) -> int:
        """Read ``x[position]``.

        Raises:
            ValueError: If the position is out of range.
        """
        if not 0 <= position < self.x.length:
            raise ValueError(f"Position {position} out of range for length {self.x.length}")
        self._transcript.append(QueryRecord(kind="classical", position=position))
        return self.x[position]

    def query_many(self, positions: npt.NDArray[np.integer]) -> npt.NDArray[np.uint8]:
        """Read several positions, one transcript entry each."""
        return np.fromiter((self.query(int(p)) for p in positions), dtype=np.uint8, count=len(positions))

    def invoke(self, state: QuantumState) -> QuantumState:
        """Apply the XOR oracle of x (viewed as a function of log n bits) to ``state``."""
        self._transcript.append(QueryRecord(kind="quantum"))
        return state.oracle_xor(self.as_function())

    def record_invocations(self, count: int) -> None:
        """Log ``count`` quantum invocations whose output state was prepared once and reused."""
        if count < 0:
            raise ValueError(f"Invocation count must be non-negative, got {count}")
        self._transcript.extend(QueryRecord(kind="quantum") for _ in range(count))

    def as_function(self) -> BooleanFunction:
        return BooleanFunction(log2_exact(self.x.length), self.x)

    def outcome(self, verdict: Verdict, detail: str = "") -> TestOutcome:
        return TestOutcome(
            verdict=verdict, queries=self.queries, transcript=self.transcript, detail=detail
        )


def _member_values(A: Collection[BitString], m: int) -> set[int]:
    if not A:
        raise ValueError("A must be nonempty")
    values = set()
    for y in A:
        if y.length != m:
            raise ValueError(f"Members of A must have {m} bits, got {y.length}")
        values.add(y.value)
    return values


def _code_length(n: int) -> int:
    m = log2_exact(n)
    if m < 1:
        raise ValueError(f"Input length must be a power of two >= 2, got {n}")
    return m


def _rng(cfg: TesterConfig, rng: np.random.Generator | None) -> np.random.Generator:
    return rng if rng is not None else np.random.default_rng(cfg.seed)


def classical_test_PA(  # noqa: N802
    oracle: QueryOracle,
    A: Collection[BitString],
    cfg: TesterConfig,
    rng: np.random.Generator | None = None,
) -> TestOutcome:
    """Classical tester: decode a candidate, then spot-check k random positions.

    All ``log n + k`` positions are read on every run, so the query count is
    the same for members and non-members.

    Args:
        oracle: Access to the input of length n.
        A: Allowed messages, each of ``log n`` bits.
        cfg: Tester parameters; ``cfg.rounds`` spot checks are made.
        rng: Generator; defaults to one seeded from ``cfg.seed``.

    Returns:
        Outcome with ``log n + k`` queries.

    Raises:
        ValueError: If n is not a power of two or A is malformed.
    """
    m = _code_length(oracle.length)
    allowed = _member_values(A, m)
    rng = _rng(cfg, rng)

    y = BitString(sum(oracle.query(1 << i) << i for i in range(m)), m)
    positions = rng.integers(0, oracle.length, size=cfg.rounds)
    answers = oracle.query_many(positions)
    expected = parity_array(positions & y.value)

    if y.value not in allowed:
        return oracle.outcome("reject", detail=f"candidate {y} not in A")
    mismatches = int(np.count_nonzero(answers != expected))
    if mismatches:
        return oracle.outcome("reject", detail=f"{mismatches} spot checks disagree with h({y})")
    return oracle.outcome("accept", detail=f"candidate {y}")


def blr_round(oracle: QueryOracle, rng: np.random.Generator) -> bool:
    """One BLR linearity check ``x_i ⊕ x_j == x_{i⊕j}``; three queries.

    Returns:
        True when the round passes.
    """
    _code_length(oracle.length)
    i, j = (int(v) for v in rng.integers(0, oracle.length, size=2))
    return oracle.query(i) ^ oracle.query(j) == oracle.query(i ^ j)


def bernstein_vazirani_state(f: BooleanFunction) -> QuantumState:
    """State after ``H, O_f, H`` with Y prepared in ``|->`` (no query accounting)."""
    return QuantumState.init(f.n, 0).prepare_y_minus().hadamard_x().oracle_xor(f).hadamard_x()


def bv_extract(oracle: QueryOracle, rng: np.random.Generator) -> BitString:
    """Bernstein-Vazirani: one oracle invocation, then measure X.

    On a codeword ``h(y)`` the outcome is y with certainty.
    """
    m = _code_length(oracle.length)
    state = QuantumState.init(m, 0).prepare_y_minus().hadamard_x()
    oracle.invoke(state).hadamard_x()
    outcome, _ = state.measure_x(rng)
    return outcome


def bv_distribution(x: BitString) -> OutcomeDistribution:
    """Exact Bernstein-Vazirani outcome distribution on input ``x``."""
    _code_length(x.length)
    return bernstein_vazirani_state(BooleanFunction(log2_exact(x.length), x)).x_distribution()


def quantum_test_PA(  # noqa: N802
    x: BitString,
    A: Collection[BitString],
    cfg: TesterConfig,
    rng: np.random.Generator | None = None,
) -> TestOutcome:
    """Quantum tester: k BLR rounds then one Bernstein-Vazirani extraction.

    Rejects at the first failing BLR round; otherwise accepts iff the
    extracted y is in A. A full run makes ``3k + 1`` oracle invocations.

    Raises:
        ValueError: If n is not a power of two or A is malformed.
    """
    m = _code_length(x.length)
    allowed = _member_values(A, m)
    rng = _rng(cfg, rng)
    oracle = QueryOracle(x)

    for round_no in range(cfg.rounds):
        if not blr_round(oracle, rng):
            logger.debug(f"BLR round {round_no} failed after {oracle.queries} queries")
            return oracle.outcome("reject", detail=f"BLR round {round_no} failed")

    y = bv_extract(oracle, rng)
    if y.value not in allowed:
        return oracle.outcome("reject", detail=f"extracted {y} not in A")
    return oracle.outcome("accept", detail=f"extracted {y}")


def generic_query_count(s: int, epsilon: float, constant: float = 2.0) -> int:
    """``ceil(constant * (ln s + 1) / epsilon)``.

    Raises:
        ValueError: If s < 1 or epsilon is outside (0, 1).
    """
    if s < 1:
        raise ValueError(f"Property needs at least one member, got {s}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return math.ceil(round(constant * (math.log(s) + 1) / epsilon, 9))


def generic_test(
    oracle: QueryOracle,
    P: Sequence[BitString],
    cfg: TesterConfig,
    rng: np.random.Generator | None = None,
) -> TestOutcome:
    """Consistency tester for an explicitly listed property.

    Reads q uniformly random positions and accepts iff some member agrees with
    every answer. A member is never rejected; a far input survives one fixed
    member with probability at most ``(1 - epsilon)^q``.

    Raises:
        ValueError: If P is empty or its members have the wrong length.
    """
    if not P:
        raise ValueError("Property must have at least one member")
    for g in P:
        if g.length != oracle.length:
            raise ValueError(f"Member length {g.length} != input length {oracle.length}")
    rng = _rng(cfg, rng)

    q = generic_query_count(len(P), cfg.epsilon, cfg.generic_constant)
    positions = rng.integers(0, oracle.length, size=q)
    answers = oracle.query_many(positions)

    members = np.stack([g.to_array() for g in P])
    consistent = np.all(members[:, positions] == answers, axis=1)
    survivors = int(np.count_nonzero(consistent))
    if survivors:
        return oracle.outcome("accept", detail=f"{survivors} consistent members")
    return oracle.outcome("reject", detail="no consistent member")


# Exact analysis


def blr_pass_probability(x: BitString) -> float:
    """Exact single-round BLR pass probability ``1/2 + 1/2 sum_y F(y)^3``."""
    spectrum = walsh_spectrum(x)
    return float(0.5 + 0.5 * np.sum(spectrum**3))


def blr_pass_probability_bruteforce(x: BitString) -> float:
    """Same quantity by enumerating all ``(i, j)`` pairs."""
    values = x.to_array()
    idx = np.arange(x.length)
    passes = (values[:, None] ^ values[None, :]) == values[idx[:, None] ^ idx[None, :]]
    return float(passes.mean())


def quantum_rejection_probability(
    x: BitString, A: Collection[BitString], rounds: int
) -> float:
    """Exact rejection probability of :func:`quantum_test_PA` with ``rounds`` BLR rounds."""
    m = _code_length(x.length)
    allowed = _member_values(A, m)
    spectrum = walsh_spectrum(x)
    accept_bv = float(sum(spectrum[y] ** 2 for y in allowed))
    return 1.0 - blr_pass_probability(x) ** rounds * accept_bv


def classical_acceptance_probability(
    x: BitString, A: Collection[BitString], rounds: int
) -> float:
    """Exact acceptance probability of :func:`classical_test_PA`."""
    m = _code_length(x.length)
    allowed = _member_values(A, m)
    y = hadamard_decode_candidate(x)
    if y.value not in allowed:
        return 0.0
    agreement = 1.0 - (x ^ hadamard_encode(y)).weight / x.length
    return float(agreement**rounds)


def hadamard_property(A: Collection[BitString], m: int) -> PropertySpec:
    """``P_A`` as a :class:`PropertySpec` over strings of length ``2^m``."""
    allowed = _member_values(A, m)
    members = sorted(allowed)
    codewords = {hadamard_encode(BitString(y, m)).value for y in members}
    frozen = [BitString(y, m) for y in members]

    def sample_member(rng: np.random.Generator) -> BitString:
        return hadamard_encode(frozen[int(rng.integers(len(frozen)))])

    return PropertySpec(
        name="hadamard",
        length=1 << m,
        contains=lambda x: x.value in codewords,
        distance=lambda x: distance_to_PA(x, frozen),
        sample_member=sample_member,
    )


def sample_far_input(
    A: Collection[BitString],
    m: int,
    epsilon: float,
    rng: np.random.Generator,
    max_attempts: int = 1000,
) -> BitString:
    """Uniform random string of length ``2^m`` at distance > ``epsilon 2^m`` from ``P_A``.

    Raises:
        RuntimeError: If no far string is found within ``max_attempts`` draws.
    """
    members = [BitString(y, m) for y in sorted(_member_values(A, m))]
    n = 1 << m
    for _ in range(max_attempts):
        x = random_bitstring(n, rng)
        if distance_to_PA(x, members) > epsilon * n:
            return x
    logger.warning(f"No input farther than {epsilon} found in {max_attempts} draws (n={n})")
    raise RuntimeError(f"Could not sample an input farther than {epsilon * n} from P_A")


def codeword_strategy_accuracy(A: Collection[BitString], positions: Sequence[int]) -> float:
    """Best accuracy of a non-adaptive reader of ``positions`` at deciding ``y in A``.

    The input is ``h(y)`` for y uniform over ``{0,1}^m``. For each answer
    pattern the optimal rule outputs the majority label among the y that
    produce it.
    """
    if not A:
        raise ValueError("A must be nonempty")
    m = next(iter(A)).length
    allowed = _member_values(A, m)
    ys = np.arange(1 << m, dtype=np.int64)
    key = np.zeros_like(ys)
    for bit, position in enumerate(positions):
        if not 0 <= position < 1 << m:
            raise ValueError(f"Position {position} out of range for length {1 << m}")
        key |= parity_array(ys & position).astype(np.int64) << bit
    labels = np.isin(ys, list(allowed)).astype(np.int64)
    counts = np.bincount(key * 2 + labels, minlength=2 << len(positions)).reshape(-1, 2)
    return float(counts.max(axis=1).sum() / ys.size)
