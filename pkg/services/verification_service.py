"""Exhaustive and randomized checks of the identities the testers rely on.

Each check returns a :class:`CheckResult`; :func:`verify_lemmas` runs them all
and is what ``qpt verify lemmas`` reports.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, Field

from models.bits import Basis, BitString, BooleanFunction
from services.dwise_service import DWiseSpace, find_nonzero_gap, monomials, monomial_gap, verify_dwise
from services.hadamard_tester_service import bv_distribution
from services.simon_tester_service import (
    closed_form_state,
    is_coset_constant,
    is_member,
    majority_repair,
    minimal_coset_constant_dimension,
    prepare_q_state,
)
from utils.f2_utils import basis_of, enumerate_reduced_bases, hadamard_encode, random_bitstring

logger = logging.getLogger(__name__)

AMPLITUDE_TOLERANCE = 1e-10
PROBABILITY_TOLERANCE = 1e-9


class CheckResult(BaseModel):
    """Outcome of one verification check.

    Attributes:
        name: Check identifier.
        passed: True when no counterexample was found.
        cases: Number of cases examined.
        counterexamples: Up to a few failing cases, rendered as text.
        detail: Extra context (worst deviation, parameters).
    """

    name: str
    passed: bool
    cases: int = Field(..., ge=0)
    counterexamples: list[str] = Field(default_factory=list)
    detail: str = ""


def _result(name: str, cases: int, failures: list[str], detail: str = "") -> CheckResult:
    if failures:
        logger.warning(f"Check {name} failed on {len(failures)} of {cases} cases")
    return CheckResult(
        name=name, passed=not failures, cases=cases, counterexamples=failures[:5], detail=detail
    )


def check_codeword_distances(max_m: int = 5) -> CheckResult:
    """Distinct codewords of length ``2^m`` differ in exactly half the positions."""
    failures: list[str] = []
    cases = 0
    for m in range(1, max_m + 1):
        words = [hadamard_encode(BitString(y, m)) for y in range(1 << m)]
        for a in range(len(words)):
            for b in range(a + 1, len(words)):
                cases += 1
                if (words[a] ^ words[b]).weight != 1 << (m - 1):
                    failures.append(f"m={m} y={a} y'={b}")
    return _result("codeword-distance", cases, failures)


def check_bv_exactness(lengths: tuple[int, ...] = (4, 8, 16, 32)) -> CheckResult:
    """Bernstein-Vazirani on ``h(y)`` yields y with probability 1."""
    failures: list[str] = []
    cases = 0
    for n in lengths:
        m = n.bit_length() - 1
        for y in range(1 << m):
            cases += 1
            mass = bv_distribution(hadamard_encode(BitString(y, m))).probs[y]
            if mass < 1 - PROBABILITY_TOLERANCE:
                failures.append(f"n={n} y={BitString(y, m)} mass={mass}")
    return _result("bv-exactness", cases, failures)


def _random_basis(n: int, rng: np.random.Generator) -> Basis:
    k = int(rng.integers(0, n + 1))
    return basis_of([random_bitstring(n, rng) for _ in range(k)], n)


def _random_function(n: int, rng: np.random.Generator) -> BooleanFunction:
    return BooleanFunction.from_array(rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def check_closed_form(
    ns: tuple[int, ...] = (2, 3, 4), configurations: int = 100, seed: int = 0
) -> CheckResult:
    """Simulated subroutine Q state equals its closed form."""
    rng = np.random.default_rng(seed)
    failures: list[str] = []
    worst = 0.0
    cases = 0
    for n in ns:
        for _ in range(configurations):
            f = _random_function(n, rng)
            basis = _random_basis(n, rng)
            deviation = prepare_q_state(f, basis).max_deviation(closed_form_state(f, basis))
            worst = max(worst, deviation)
            cases += 1
            if deviation >= AMPLITUDE_TOLERANCE:
                failures.append(f"f={f.to_table()} basis={basis.labels()} dev={deviation:.2e}")
    return _result("closed-form-state", cases, failures, detail=f"max deviation {worst:.2e}")


def _all_functions(n: int) -> list[BooleanFunction]:
    size = 1 << n
    return [BooleanFunction(n, BitString(v, size)) for v in range(1 << size)]


def check_zero_state_iff(n: int = 3) -> CheckResult:
    """Outcome 0 is certain exactly when f is constant on every coset."""
    bases = list(enumerate_reduced_bases(n))
    failures: list[str] = []
    cases = 0
    for f in _all_functions(n):
        for basis in bases:
            cases += 1
            certain = abs(prepare_q_state(f, basis).p0_norm_sq() - 1.0) < PROBABILITY_TOLERANCE
            if certain != is_coset_constant(f, basis):
                failures.append(f"f={f.to_table()} basis={basis.labels()}")
    return _result("zero-outcome-iff-coset-constant", cases, failures)


def check_membership_iff(n: int = 3) -> CheckResult:
    """Some basis of fewer than n vectors makes f coset-constant exactly when f is in L."""
    failures: list[str] = []
    cases = 0
    for f in _all_functions(n):
        cases += 1
        k, _ = minimal_coset_constant_dimension(f)
        if (k < n) != is_member(f):
            failures.append(f"f={f.to_table()} k={k}")
    return _result("membership-iff-small-basis", cases, failures)


def check_majority_repair(n: int = 3, epsilons: tuple[float, ...] = (0.25, 0.5)) -> CheckResult:
    """A high zero-outcome probability puts f within eps N of a coset-constant function."""
    bases = list(enumerate_reduced_bases(n))
    size = 1 << n
    failures: list[str] = []
    cases = 0
    for eps in epsilons:
        for f in _all_functions(n):
            for basis in bases:
                if prepare_q_state(f, basis).p0_norm_sq() < 1 - eps * eps / 2:
                    continue
                cases += 1
                g = majority_repair(f, basis)
                distance = (f.table ^ g.table).weight
                if not is_coset_constant(g, basis) or distance > eps * size:
                    failures.append(f"eps={eps} f={f.to_table()} basis={basis.labels()} d={distance}")
    return _result("majority-repair-bound", cases, failures)


def check_repetition_arithmetic() -> CheckResult:
    """``(1 - delta)^m <= q`` for ``m = ceil(log q / log(1 - delta))``."""
    failures: list[str] = []
    cases = 0
    for q in (0.5, 1 / 3, 0.1, 0.01):
        for delta in (0.01, 0.05, 0.125, 0.25, 0.5, 0.9):
            cases += 1
            m = math.ceil(math.log(q) / math.log(1 - delta))
            if (1 - delta) ** m > q * (1 + 1e-12):
                failures.append(f"q={q} delta={delta} m={m}")
    return _result("repetition-arithmetic", cases, failures)


def check_dwise_independence(
    spaces: tuple[tuple[int, int], ...] = ((3, 1), (4, 1)),
) -> CheckResult:
    """Every shipped space is d-wise independent, and (3, 1) is not (d+1)-wise."""
    failures: list[str] = []
    cases = 0
    for k, t in spaces:
        space = DWiseSpace(k, t)
        report = verify_dwise(space, space.d)
        cases += report.subsets_checked
        if not report.passed:
            failures.append(f"k={k} t={t} subset={report.violation}")
    tight = verify_dwise(DWiseSpace(3, 1), 4)
    cases += tight.subsets_checked
    if tight.passed:
        failures.append("k=3 t=1 is unexpectedly 4-wise independent")
    return _result("dwise-independence", cases, failures)


def check_monomial_gaps(k: int = 3, t: int = 1) -> CheckResult:
    """Monomials of degree <= d have equal expectation over the property and uniformly."""
    space = DWiseSpace(k, t)
    failures: list[str] = []
    cases = 0
    for degree in range(space.d + 1):
        for m in monomials(space, degree):
            cases += 1
            if monomial_gap(space, m).gap != 0:
                failures.append(f"{m}")
    if find_nonzero_gap(space, space.d + 1) is None:
        failures.append(f"no monomial of degree {space.d + 1} has a nonzero gap")
    return _result("monomial-gaps", cases, failures)


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "codeword-distance": check_codeword_distances,
    "bv-exactness": check_bv_exactness,
    "closed-form-state": check_closed_form,
    "zero-outcome-iff-coset-constant": check_zero_state_iff,
    "membership-iff-small-basis": check_membership_iff,
    "majority-repair-bound": check_majority_repair,
    "repetition-arithmetic": check_repetition_arithmetic,
    "dwise-independence": check_dwise_independence,
    "monomial-gaps": check_monomial_gaps,
}


def verify_lemmas(only: list[str] | None = None) -> list[CheckResult]:
    """Run the named checks (all by default) in a fixed order.

    Raises:
        ValueError: If an unknown check is requested.
    """
    names = list(CHECKS) if not only else only
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ValueError(f"Unknown checks: {', '.join(unknown)}. Available: {', '.join(CHECKS)}")
    results = []
    for name in names:
        logger.info(f"Running check {name}")
        results.append(CHECKS[name]())
    return results
