"""Seeded, parallel experiment runs and their aggregation.

Every trial is a :class:`TrialSpec` carrying its own seed, derived from the
master seed and the trial's coordinates (never from scheduling), so records
are identical whatever the worker count. Trials are executed in batches by a
process pool and collected in trial order.
"""

import logging
import math
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
import numpy.typing as npt

from models.bits import BitString, BooleanFunction
from models.tester import TestOutcome, TesterConfig
from models.trial_record import ExperimentSummary, TrialRecord
from services.dwise_service import (
    MAX_PROPERTY_LENGTH,
    DWiseSpace,
    enumerate_property,
    property_members,
)
from services.hadamard_tester_service import (
    QueryOracle,
    classical_test_PA,
    codeword_strategy_accuracy,
    generic_test,
    quantum_test_PA,
    sample_far_input,
)
from services.simon_tester_service import (
    high_agreement_rate,
    main_program,
    promise_set,
    repetition_limit,
    sample_far_function,
    sample_P,
)
from utils.batch_utils import split_batches
from utils.f2_utils import hadamard_encode, log2_exact, random_bitstring

logger = logging.getLogger(__name__)

WILSON_Z = 1.959963984540054

HADAMARD_MODES = ("classical", "quantum", "generic")
INPUT_KINDS = ("member", "far", "given")

# First spawn-key component separating independent random streams.
TRIAL_STREAM = 0
SETUP_STREAM = 1
STRATEGY_STREAM = 2

MAX_BIAS_N = 8


def derive_seed(master: int, *key: int) -> int:
    """Per-item 64-bit seed from the master seed and an integer key path.

    Examples:
        >>> derive_seed(7, 0, 3, 1) == derive_seed(7, 0, 3, 1)
        True
    """
    sequence = np.random.SeedSequence(master, spawn_key=tuple(key))
    return int(sequence.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class TrialSpec:
    """Everything a worker needs to run one trial.

    Attributes:
        experiment: Experiment id copied into the record.
        config: Configuration label grouping trials.
        trial: Trial index within the configuration.
        n: String length (Hadamard modes, dwise) or domain bits (simon).
        eps: Distance parameter.
        mode: ``classical``, ``quantum``, ``generic``, ``simon`` or ``dwise``.
        input_kind: ``member``, ``far`` or ``given``.
        seed: Derived seed driving input sampling and the tester.
        a_values: Allowed messages of ``P_A`` as integers (Hadamard modes).
        input_value: Packed input for ``given`` inputs.
        settings: Tester constants and space parameters.
        record_timing: Store wall time in the record.
    """

    experiment: str
    config: str
    trial: int
    n: int
    eps: float
    mode: str
    input_kind: str
    seed: int
    a_values: tuple[int, ...] = ()
    input_value: int | None = None
    settings: dict[str, Any] = field(default_factory=dict)
    record_timing: bool = False


class ExperimentResult(NamedTuple):
    records: list[TrialRecord]
    summaries: list[ExperimentSummary]


def _tester_config(spec: TrialSpec) -> TesterConfig:
    return TesterConfig(
        epsilon=spec.eps,
        blr_multiplier=spec.settings.get("blr_multiplier", 2.0),
        generic_constant=spec.settings.get("generic_constant", 2.0),
        repetition_multiplier=spec.settings.get("repetition_multiplier", 2.0),
        seed=spec.seed,
    )


def _given_input(spec: TrialSpec, length: int) -> BitString:
    if spec.input_value is None:
        raise ValueError("A 'given' trial needs an input value")
    return BitString(spec.input_value, length)


def _run_hadamard(spec: TrialSpec, rng: np.random.Generator) -> tuple[TestOutcome, dict[str, Any]]:
    m = log2_exact(spec.n)
    A = [BitString(v, m) for v in spec.a_values]
    if not A:
        raise ValueError("Hadamard trials need a nonempty A")
    cfg = _tester_config(spec)

    if spec.input_kind == "member":
        x = hadamard_encode(A[int(rng.integers(len(A)))])
    elif spec.input_kind == "far":
        x = sample_far_input(A, m, spec.eps, rng)
    else:
        x = _given_input(spec, spec.n)

    if spec.mode == "classical":
        outcome = classical_test_PA(QueryOracle(x), A, cfg, rng)
    elif spec.mode == "quantum":
        outcome = quantum_test_PA(x, A, cfg, rng)
    else:
        outcome = generic_test(QueryOracle(x), [hadamard_encode(y) for y in A], cfg, rng)
    return outcome, {"rounds": cfg.rounds, "a_size": len(A)}


def _run_simon(spec: TrialSpec, rng: np.random.Generator) -> tuple[TestOutcome, dict[str, Any]]:
    n = spec.n
    multiplier = spec.settings.get("repetition_multiplier", 2.0)
    if spec.input_kind == "member":
        f = sample_P(n, rng).f
    elif spec.input_kind == "far":
        f = sample_far_function(n, spec.settings.get("min_distance", max(1, (1 << n) // 8)), rng)
    else:
        f = BooleanFunction(n, _given_input(spec, 1 << n))

    outcome = main_program(
        f,
        spec.eps,
        rng,
        repetition_multiplier=multiplier,
        reuse_prepared_state=spec.settings.get("reuse_prepared_state", True),
        promise=promise_set(f),
    )
    limit = repetition_limit(n, spec.eps, multiplier)
    return outcome, {
        "repetition_limit": limit,
        "query_bound": n * limit,
        "basis_dim": len(outcome.basis),
    }


def _run_dwise(spec: TrialSpec, rng: np.random.Generator) -> tuple[TestOutcome, dict[str, Any]]:
    space = DWiseSpace(spec.settings["k"], spec.settings["t"])
    max_length = spec.settings.get("max_property_length", MAX_PROPERTY_LENGTH)
    prop = enumerate_property(space, max_length)
    if spec.input_kind == "member":
        x = prop.sample_member(rng)
    elif spec.input_kind == "far":
        for _ in range(10_000):
            x = random_bitstring(space.n, rng)
            if prop.is_far(x, spec.eps):
                break
        else:
            raise RuntimeError(f"Could not sample an input farther than {spec.eps} from the property")
    else:
        x = _given_input(spec, space.n)
    members = property_members(space, max_length)
    outcome = generic_test(QueryOracle(x), members, _tester_config(spec), rng)
    return outcome, {"k": space.k, "t": space.t, "members": len(members)}


def run_trial(spec: TrialSpec) -> TrialRecord:
    """Run one trial in the current process.

    Raises:
        ValueError: If the mode or input kind is unknown.
    """
    if spec.input_kind not in INPUT_KINDS:
        raise ValueError(f"Unknown input kind '{spec.input_kind}'")
    start = time.perf_counter()
    rng = np.random.default_rng(spec.seed)

    if spec.mode in HADAMARD_MODES:
        outcome, params = _run_hadamard(spec, rng)
    elif spec.mode == "simon":
        outcome, params = _run_simon(spec, rng)
    elif spec.mode == "dwise":
        outcome, params = _run_dwise(spec, rng)
    else:
        raise ValueError(f"Unknown tester mode '{spec.mode}'")

    elapsed = time.perf_counter() - start
    return TrialRecord(
        experiment=spec.experiment,
        config=spec.config,
        trial=spec.trial,
        n=spec.n,
        eps=spec.eps,
        mode=spec.mode,
        input_kind=spec.input_kind,
        seed=spec.seed,
        verdict=outcome.verdict,
        queries=outcome.queries,
        params=params,
        wall_time_s=elapsed if spec.record_timing else None,
    )


def _run_batch(batch: Sequence[TrialSpec]) -> list[TrialRecord]:
    return [run_trial(spec) for spec in batch]


def run_trials(
    specs: Sequence[TrialSpec],
    workers: int = 1,
    batch_size: int = 64,
    progress: Callable[[int], None] | None = None,
) -> list[TrialRecord]:
    """Run trials, in-process or on a process pool, returning records in spec order.

    Args:
        specs: Trials to run.
        workers: Worker processes; 1 runs in the calling process.
        batch_size: Trials per work item.
        progress: Called with the number of trials finished in each batch.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    batches = split_batches(specs, batch_size)
    logger.info(f"Running {len(specs)} trials in {len(batches)} batches on {workers} worker(s)")

    records: list[TrialRecord] = []
    if workers == 1:
        results: Iterable[list[TrialRecord]] = map(_run_batch, batches)
        for batch_records in results:
            records.extend(batch_records)
            if progress:
                progress(len(batch_records))
        return records

    with ProcessPoolExecutor(max_workers=workers) as executor:
        for batch_records in executor.map(_run_batch, batches):
            records.extend(batch_records)
            if progress:
                progress(len(batch_records))
    return records


# Aggregation


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to contain the estimate."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(p, center - half)), min(1.0, max(p, center + half))


def summarize(records: Iterable[TrialRecord]) -> list[ExperimentSummary]:
    """One summary per configuration, in first-appearance order."""
    groups: dict[tuple[Any, ...], list[TrialRecord]] = {}
    for record in records:
        groups.setdefault(record.group_key, []).append(record)

    summaries = []
    for (experiment, config, n, eps, mode, input_kind), rows in groups.items():
        accepts = sum(1 for r in rows if r.verdict == "accept")
        queries = [r.queries for r in rows]
        low, high = wilson_interval(accepts, len(rows))
        summaries.append(
            ExperimentSummary(
                experiment=experiment,
                config=config,
                n=n,
                eps=eps,
                mode=mode,
                input_kind=input_kind,
                trials=len(rows),
                accepts=accepts,
                accept_rate=accepts / len(rows),
                ci_low=low,
                ci_high=high,
                mean_queries=sum(queries) / len(queries),
                max_queries=max(queries),
                min_queries=min(queries),
            )
        )
    return summaries


# Experiments


def _check_epsilons(epsilons: Sequence[float]) -> None:
    if not epsilons:
        raise ValueError("Experiment grid needs at least one epsilon")
    for eps in epsilons:
        if not 0 < eps < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {eps}")


def choose_a(m: int, seed: int, size: int | None = None) -> tuple[int, ...]:
    """Random ``A ⊆ {0,1}^m`` (half of all messages by default), sorted."""
    total = 1 << m
    size = max(1, total // 2) if size is None else size
    if not 1 <= size <= total:
        raise ValueError(f"|A| must be in 1..{total}, got {size}")
    rng = np.random.default_rng(seed)
    return tuple(sorted(int(v) for v in rng.choice(total, size=size, replace=False)))


def run_separation_hadamard(
    lengths: Sequence[int],
    epsilons: Sequence[float],
    trials: int,
    seed: int,
    workers: int = 1,
    batch_size: int = 64,
    modes: Sequence[str] = ("classical", "quantum"),
    input_kinds: Sequence[str] = ("member", "far"),
    blr_multiplier: float = 2.0,
    record_timing: bool = False,
    progress: Callable[[int], None] | None = None,
) -> ExperimentResult:
    """Classical vs quantum testers for ``P_A`` over a grid of lengths and epsilons.

    Each length n gets one random A of size n/2 shared by all cells at that
    length. Query counts are exact per run: ``log n + k`` classical and at most
    ``3k + 1`` quantum.

    Summaries carry ``short_reader_accuracy`` in ``extra``: the best accuracy
    at deciding ``y in A`` from ``h(y)`` when only ``log n - 1`` of the
    decoding positions are read.

    Raises:
        ValueError: If a length is not a power of two >= 2 or the grid is empty.
    """
    if not lengths:
        raise ValueError("Experiment grid needs at least one length")
    for n in lengths:
        if n < 2 or n & (n - 1):
            raise ValueError(f"Lengths must be powers of two >= 2, got {n}")
    _check_epsilons(epsilons)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    for mode in modes:
        if mode not in HADAMARD_MODES:
            raise ValueError(f"Unknown tester mode '{mode}'")

    specs: list[TrialSpec] = []
    short_reader: dict[int, float] = {}
    cell = 0
    for length_index, n in enumerate(lengths):
        m = log2_exact(n)
        a_values = choose_a(m, derive_seed(seed, SETUP_STREAM, length_index))
        short_reader[n] = codeword_strategy_accuracy(
            [BitString(v, m) for v in a_values], [1 << i for i in range(m - 1)]
        )
        for eps in epsilons:
            for mode in modes:
                for kind in input_kinds:
                    specs.extend(
                        TrialSpec(
                            experiment="separation",
                            config=f"n={n},eps={eps}",
                            trial=t,
                            n=n,
                            eps=eps,
                            mode=mode,
                            input_kind=kind,
                            seed=derive_seed(seed, TRIAL_STREAM, cell, t),
                            a_values=a_values,
                            settings={"blr_multiplier": blr_multiplier},
                            record_timing=record_timing,
                        )
                        for t in range(trials)
                    )
                    cell += 1

    logger.info(f"Separation experiment: {len(lengths)} lengths x {len(epsilons)} epsilons")
    records = run_trials(specs, workers, batch_size, progress)
    summaries = [
        s.model_copy(update={"extra": {"short_reader_accuracy": short_reader[s.n]}})
        for s in summarize(records)
    ]
    return ExperimentResult(records, summaries)


def run_simon_query_scaling(
    ns: Sequence[int],
    epsilon: float,
    trials: int,
    seed: int,
    workers: int = 1,
    batch_size: int = 64,
    input_kinds: Sequence[str] = ("member",),
    repetition_multiplier: float = 2.0,
    reuse_prepared_state: bool = True,
    record_timing: bool = False,
    progress: Callable[[int], None] | None = None,
    agreement_samples: int = 200,
) -> ExperimentResult:
    """Oracle invocations of the Simon tester per domain size against ``n * L``.

    Summaries carry ``repetition_limit``, ``query_bound`` and
    ``high_agreement_rate`` in ``extra``. The last is the fraction of
    ``agreement_samples`` uniform functions that agree with some nonzero
    shift on at least 7/8 of the domain.
    """
    if not ns:
        raise ValueError("Experiment grid needs at least one n")
    for n in ns:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
    _check_epsilons([epsilon])
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    settings = {
        "repetition_multiplier": repetition_multiplier,
        "reuse_prepared_state": reuse_prepared_state,
    }
    specs: list[TrialSpec] = []
    cell = 0
    for n in ns:
        for kind in input_kinds:
            specs.extend(
                TrialSpec(
                    experiment="simon-scaling",
                    config=f"n={n},eps={epsilon}",
                    trial=t,
                    n=n,
                    eps=epsilon,
                    mode="simon",
                    input_kind=kind,
                    seed=derive_seed(seed, TRIAL_STREAM, cell, t),
                    settings=settings,
                    record_timing=record_timing,
                )
                for t in range(trials)
            )
            cell += 1

    records = run_trials(specs, workers, batch_size, progress)
    agreement = {
        n: high_agreement_rate(
            n, agreement_samples, np.random.default_rng(derive_seed(seed, SETUP_STREAM, index))
        )
        for index, n in enumerate(ns)
    }
    summaries = []
    for summary in summarize(records):
        limit = repetition_limit(summary.n, epsilon, repetition_multiplier)
        extra = {
            "repetition_limit": limit,
            "query_bound": summary.n * limit,
            "high_agreement_rate": agreement[summary.n],
        }
        summaries.append(summary.model_copy(update={"extra": extra}))
    return ExperimentResult(records, summaries)


# Decision-tree bias experiment


@dataclass(frozen=True)
class DecisionTree:
    """Complete depth-q query strategy stored in heap order.

    Node ``v`` queries ``positions[v]``; answer b moves to child ``2v + 1 + b``.
    After q answers the walk sits at leaf ``v - (2^q - 1)`` and outputs
    ``labels[leaf]``.

    Attributes:
        depth: Number of queries q.
        positions: Queried position per internal node, length ``2^q - 1``.
        labels: Output per leaf, length ``2^q``.
    """

    depth: int
    positions: npt.NDArray[np.int64]
    labels: npt.NDArray[np.uint8]

    @classmethod
    def random(cls, depth: int, size: int, rng: np.random.Generator) -> "DecisionTree":
        return cls(
            depth=depth,
            positions=rng.integers(0, size, size=(1 << depth) - 1, dtype=np.int64),
            labels=rng.integers(0, 2, size=1 << depth, dtype=np.uint8),
        )

    def evaluate(
        self, tables: npt.NDArray[np.uint8]
    ) -> tuple[npt.NDArray[np.uint8], npt.NDArray[np.int64]]:
        """Run the strategy on every row of ``tables``.

        Returns:
            Outputs per row and the positions read per row, shape ``(rows, q)``.
        """
        rows = np.arange(tables.shape[0])
        node = np.zeros(tables.shape[0], dtype=np.int64)
        path = np.zeros((tables.shape[0], self.depth), dtype=np.int64)
        for level in range(self.depth):
            position = self.positions[node]
            path[:, level] = position
            node = 2 * node + 1 + tables[rows, position].astype(np.int64)
        return self.labels[node - ((1 << self.depth) - 1)], path


def _paired_tables(
    n: int, samples: int, rng: np.random.Generator
) -> tuple[npt.NDArray[np.uint8], npt.NDArray[np.int64]]:
    """``samples`` draws of the paired distribution as rows, with their shifts."""
    size = 1 << n
    shifts = rng.integers(1, size, size=samples, dtype=np.int64)
    bits = rng.integers(0, 2, size=(samples, size), dtype=np.uint8)
    xs = np.arange(size, dtype=np.int64)
    owners = np.minimum(xs[None, :], xs[None, :] ^ shifts[:, None])
    return np.take_along_axis(bits, owners, axis=1), shifts


def _collision_rate(path: npt.NDArray[np.int64], shifts: npt.NDArray[np.int64]) -> float:
    """Fraction of rows whose shift equals the XOR of two positions read on the path."""
    hit = np.zeros(path.shape[0], dtype=bool)
    for v in range(path.shape[1]):
        for w in range(v + 1, path.shape[1]):
            hit |= (path[:, v] ^ path[:, w]) == shifts
    return float(hit.mean())


def run_bias_experiment(
    n: int,
    depth: int,
    strategies: int,
    samples: int,
    seed: int,
) -> ExperimentSummary:
    """Largest acceptance gap of random depth-q strategies between paired and uniform inputs.

    The same paired and uniform samples are shared by every strategy. The
    summary's acceptance fields describe the worst strategy on paired
    inputs; ``extra`` holds the biases, its uniform acceptance rate and the
    path-collision rate with its bound ``C(q, 2) / (N - 1)``.

    Raises:
        ValueError: If a parameter is out of range.
    """
    if not 1 <= n <= MAX_BIAS_N:
        raise ValueError(f"Bias experiment supports 1 <= n <= {MAX_BIAS_N}, got {n}")
    if depth < 0 or strategies < 1 or samples < 1:
        raise ValueError(
            f"Need depth >= 0, strategies >= 1, samples >= 1; got {depth}, {strategies}, {samples}"
        )
    size = 1 << n
    sample_rng = np.random.default_rng(derive_seed(seed, SETUP_STREAM, 0))
    paired, shifts = _paired_tables(n, samples, sample_rng)
    uniform = sample_rng.integers(0, 2, size=(samples, size), dtype=np.uint8)

    biases = np.zeros(strategies)
    accept_p = np.zeros(strategies)
    accept_u = np.zeros(strategies)
    collisions = np.zeros(strategies)
    for i in range(strategies):
        tree = DecisionTree.random(depth, size, np.random.default_rng(derive_seed(seed, STRATEGY_STREAM, i)))
        out_p, path = tree.evaluate(paired)
        out_u, _ = tree.evaluate(uniform)
        accept_p[i] = out_p.mean()
        accept_u[i] = out_u.mean()
        biases[i] = abs(accept_p[i] - accept_u[i])
        collisions[i] = _collision_rate(path, shifts)

    worst = int(np.argmax(biases))
    accepts = int(round(accept_p[worst] * samples))
    low, high = wilson_interval(accepts, samples)
    logger.info(f"Bias experiment n={n} q={depth}: max bias {biases[worst]:.4f} (strategy {worst})")
    return ExperimentSummary(
        experiment="bias",
        config=f"n={n},q={depth}",
        n=n,
        eps=None,
        mode=f"depth-{depth}",
        input_kind="paired",
        trials=samples,
        accepts=accepts,
        accept_rate=accepts / samples,
        ci_low=low,
        ci_high=high,
        mean_queries=float(depth),
        max_queries=depth,
        min_queries=depth,
        extra={
            "strategies": strategies,
            "max_bias": float(biases[worst]),
            "mean_bias": float(biases.mean()),
            "worst_strategy": worst,
            "accept_rate_uniform": float(accept_u[worst]),
            "collision_rate": float(collisions.mean()),
            "collision_bound": math.comb(depth, 2) / (size - 1) if size > 1 else 0.0,
        },
    )
