"""Tests for the Hadamard-code testers and their exact analysis."""

import numpy as np
import pytest

from models.bits import BitString
from models.tester import TesterConfig
from services.hadamard_tester_service import (
    QueryOracle,
    blr_pass_probability,
    blr_pass_probability_bruteforce,
    blr_round,
    bv_distribution,
    bv_extract,
    classical_acceptance_probability,
    classical_test_PA,
    codeword_strategy_accuracy,
    generic_query_count,
    generic_test,
    hadamard_property,
    quantum_rejection_probability,
    quantum_test_PA,
    sample_far_input,
)
from utils.f2_utils import distance_to_PA, hadamard_encode, random_bitstring


def _half(m: int) -> list[BitString]:
    """Messages with an even leading coordinate, half of {0,1}^m."""
    return [BitString(v, m) for v in range(1 << m) if v % 2 == 0]


class TestQueryOracle:
    """Tests for the counting oracle."""

    def test_reads_are_logged(self) -> None:
        # Arrange
        oracle = QueryOracle(BitString.from_table("0110"))

        # Act
        bits = [oracle.query(1), oracle.query(3)]
        many = oracle.query_many(np.array([0, 2]))

        # Assert
        assert bits == [1, 0]
        assert many.tolist() == [0, 1]
        assert oracle.queries == 4
        assert [r.position for r in oracle.transcript] == [1, 3, 0, 2]

    def test_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="out of range"):
            QueryOracle(BitString.zeros(4)).query(4)

    def test_record_invocations(self) -> None:
        # Arrange
        oracle = QueryOracle(BitString.zeros(4))

        # Act
        oracle.record_invocations(3)

        # Assert
        assert oracle.queries == 3
        assert all(r.kind == "quantum" for r in oracle.transcript)
        with pytest.raises(ValueError, match="non-negative"):
            oracle.record_invocations(-1)


class TestClassicalTester:
    """Tests for classical_test_PA."""

    @pytest.mark.parametrize("n", [4, 8, 16, 32])
    def test_members_always_accepted(self, n: int) -> None:
        # Arrange
        m = n.bit_length() - 1
        A = _half(m)
        cfg = TesterConfig(epsilon=0.1)

        # Act & Assert
        for y in A:
            for seed in range(5):
                outcome = classical_test_PA(QueryOracle(hadamard_encode(y)), A, cfg, np.random.default_rng(seed))
                assert outcome.accepted
                assert outcome.queries == m + 20

    def test_query_count_is_input_independent(self, rng: np.random.Generator) -> None:
        # Arrange
        cfg = TesterConfig(epsilon=0.25)
        x = random_bitstring(16, rng)

        # Act
        outcome = classical_test_PA(QueryOracle(x), _half(4), cfg, rng)

        # Assert
        assert outcome.queries == 4 + 8

    def test_candidate_outside_a_rejected(self) -> None:
        # Arrange: h(0001) decodes to an odd message
        x = hadamard_encode(BitString(1, 4))

        # Act
        outcome = classical_test_PA(QueryOracle(x), _half(4), TesterConfig(epsilon=0.1))

        # Assert
        assert outcome.verdict == "reject"
        assert "not in A" in outcome.detail

    def test_length_one_rejected(self) -> None:
        with pytest.raises(ValueError, match="power of two >= 2"):
            classical_test_PA(QueryOracle(BitString(0, 1)), [BitString(0, 0)], TesterConfig(epsilon=0.1))

    def test_query_count_grows_by_one_per_doubling(self) -> None:
        cfg = TesterConfig(epsilon=0.1)
        counts = []
        for n in (8, 16, 32, 64):
            m = n.bit_length() - 1
            outcome = classical_test_PA(QueryOracle(hadamard_encode(BitString(0, m))), _half(m), cfg)
            counts.append(outcome.queries)
        assert np.diff(counts).tolist() == [1, 1, 1]


class TestQuantumTester:
    """Tests for quantum_test_PA and its building blocks."""

    @pytest.mark.parametrize("n", [8, 16, 32])
    def test_members_accepted_with_constant_queries(self, n: int) -> None:
        # Arrange
        m = n.bit_length() - 1
        A = _half(m)
        cfg = TesterConfig(epsilon=0.1)

        # Act & Assert
        for y in A:
            outcome = quantum_test_PA(hadamard_encode(y), A, cfg, np.random.default_rng(y.value))
            assert outcome.accepted
            assert outcome.queries == 3 * 20 + 1
            kinds = [r.kind for r in outcome.transcript]
            assert kinds.count("quantum") == 1
            assert kinds[-1] == "quantum"

    def test_codeword_outside_a_rejected_after_full_run(self) -> None:
        # Act
        outcome = quantum_test_PA(hadamard_encode(BitString(3, 3)), _half(3), TesterConfig(epsilon=0.25))

        # Assert
        assert outcome.verdict == "reject"
        assert outcome.queries == 3 * 8 + 1

    def test_blr_failure_short_circuits(self) -> None:
        # Arrange: x_0 = 1 breaks every round with i = j or i = 0
        x = BitString.from_table("10000000")
        cfg = TesterConfig(epsilon=0.1)

        # Act
        outcomes = [quantum_test_PA(x, _half(3), cfg, np.random.default_rng(s)) for s in range(20)]

        # Assert
        assert sum(o.verdict == "reject" for o in outcomes) >= 19
        assert all(o.queries % 3 == 0 or o.queries == 61 for o in outcomes)
        assert any(o.queries < 61 for o in outcomes)

    def test_far_input_rejected_often(self, rng: np.random.Generator) -> None:
        # Arrange
        A = _half(4)
        x = sample_far_input(A, 4, 0.1, rng)
        cfg = TesterConfig(epsilon=0.1)

        # Act
        rejects = sum(
            quantum_test_PA(x, A, cfg, np.random.default_rng(seed)).verdict == "reject" for seed in range(200)
        )

        # Assert
        assert rejects / 200 >= 0.55

    def test_blr_round_passes_on_codewords(self, rng: np.random.Generator) -> None:
        oracle = QueryOracle(hadamard_encode(BitString(5, 3)))
        assert all(blr_round(oracle, rng) for _ in range(50))
        assert oracle.queries == 150

    def test_bv_outcome_probability_near_codeword(self) -> None:
        # Arrange
        y = BitString(0b1011, 4)
        x = hadamard_encode(y).flip(5)

        # Act
        dist = bv_distribution(x)

        # Assert
        assert dist[y] == pytest.approx((1 - 2 / 16) ** 2)

    def test_blr_round_frequency_on_negated_codeword(self, rng: np.random.Generator) -> None:
        # Arrange
        rounds = 2_000
        x = hadamard_encode(BitString(0b101, 3)) ^ BitString(0xFF, 8)
        oracle = QueryOracle(x)
        expected = blr_pass_probability(x)

        # Act
        passes = sum(blr_round(oracle, rng) for _ in range(rounds))

        # Assert
        sigma = np.sqrt(expected * (1 - expected) / rounds)
        assert expected == pytest.approx(0.0, abs=1e-12)
        assert abs(passes / rounds - expected) <= 5 * sigma + 1e-12

    @pytest.mark.parametrize("n", [4, 8, 16, 32])
    def test_bv_extract_is_exact(self, n: int) -> None:
        m = n.bit_length() - 1
        for value in range(1 << m):
            y = BitString(value, m)
            oracle = QueryOracle(hadamard_encode(y))
            assert bv_extract(oracle, np.random.default_rng(value)) == y
            assert oracle.queries == 1


class TestGenericTester:
    """Tests for generic_test and its query count."""

    @pytest.mark.parametrize(
        ("s", "eps", "expected"), [(1, 0.5, 4), (16, 0.1, 76), (2, 0.25, 14)]
    )
    def test_query_count(self, s: int, eps: float, expected: int) -> None:
        assert generic_query_count(s, eps) == expected

    def test_query_count_errors(self) -> None:
        with pytest.raises(ValueError, match="at least one member"):
            generic_query_count(0, 0.1)
        with pytest.raises(ValueError, match="epsilon"):
            generic_query_count(3, 1.0)

    def test_members_accepted(self, rng: np.random.Generator) -> None:
        # Arrange
        P = [random_bitstring(64, rng) for _ in range(8)]
        cfg = TesterConfig(epsilon=0.2)

        # Act & Assert
        for g in P:
            outcome = generic_test(QueryOracle(g), P, cfg, rng)
            assert outcome.accepted
            assert outcome.queries == generic_query_count(8, 0.2)

    def test_single_zero_member_rejects_ones(self) -> None:
        outcome = generic_test(QueryOracle(BitString.ones(16)), [BitString.zeros(16)], TesterConfig(epsilon=0.1))
        assert outcome.verdict == "reject"

    def test_member_length_checked(self) -> None:
        with pytest.raises(ValueError, match="Member length"):
            generic_test(QueryOracle(BitString.zeros(8)), [BitString.zeros(4)], TesterConfig(epsilon=0.1))

    def test_far_inputs_rejected(self, rng: np.random.Generator) -> None:
        # Arrange
        P = [random_bitstring(256, rng) for _ in range(16)]
        prop_far = []
        while len(prop_far) < 5:
            x = random_bitstring(256, rng)
            if min((x ^ g).weight for g in P) > 0.1 * 256:
                prop_far.append(x)
        cfg = TesterConfig(epsilon=0.1)

        # Act
        rejects = sum(
            generic_test(QueryOracle(x), P, cfg, np.random.default_rng(seed)).verdict == "reject"
            for x in prop_far
            for seed in range(100)
        )

        # Assert
        assert rejects / 500 >= 2 / 3


class TestExactAnalysis:
    """Tests for the closed-form acceptance and rejection probabilities."""

    def test_blr_pass_matches_bruteforce(self, rng: np.random.Generator) -> None:
        for _ in range(10):
            x = random_bitstring(16, rng)
            assert blr_pass_probability(x) == pytest.approx(blr_pass_probability_bruteforce(x))

    def test_bv_distribution_on_codeword(self) -> None:
        dist = bv_distribution(hadamard_encode(BitString(6, 3)))
        assert dist.as_dict() == pytest.approx({"110": 1.0})

    def test_members_never_rejected(self) -> None:
        A = _half(4)
        for y in A:
            x = hadamard_encode(y)
            assert quantum_rejection_probability(x, A, 20) == pytest.approx(0.0, abs=1e-12)
            assert classical_acceptance_probability(x, A, 20) == 1.0

    @pytest.mark.parametrize("n", [16, 32])
    def test_far_inputs_rejected_with_two_thirds(self, n: int) -> None:
        # Arrange
        m = n.bit_length() - 1
        A = _half(m)
        cfg = TesterConfig(epsilon=0.1)
        rng = np.random.default_rng(n)

        # Act & Assert
        for _ in range(100):
            x = sample_far_input(A, m, 0.1, rng)
            assert distance_to_PA(x, A) > 0.1 * n
            assert quantum_rejection_probability(x, A, cfg.rounds) >= 2 / 3
            assert classical_acceptance_probability(x, A, cfg.rounds) <= 1 / 3

    def test_classical_acceptance_zero_outside_a(self) -> None:
        x = hadamard_encode(BitString(1, 3))
        assert classical_acceptance_probability(x, _half(3), 5) == 0.0


class TestPropertyHelpers:
    """Tests for hadamard_property, far sampling and the codeword strategy bound."""

    def test_property_membership_and_distance(self, rng: np.random.Generator) -> None:
        # Arrange
        A = _half(3)
        prop = hadamard_property(A, 3)

        # Act
        member = prop.sample_member(rng)

        # Assert
        assert prop.contains(member)
        assert prop.distance(member) == 0
        assert not prop.contains(hadamard_encode(BitString(1, 3)))
        assert prop.distance(hadamard_encode(BitString(1, 3))) == 4

    def test_sample_far_input_exhaustion(self, rng: np.random.Generator) -> None:
        # Every length-2 string is within distance 1 of a codeword
        with pytest.raises(RuntimeError, match="Could not sample"):
            sample_far_input([BitString(0, 1), BitString(1, 1)], 1, 0.5, rng, max_attempts=10)

    def test_codeword_strategy_full_read(self) -> None:
        A = _half(4)
        assert codeword_strategy_accuracy(A, [1, 2, 4, 8]) == 1.0

    def test_codeword_strategy_too_few_positions(self) -> None:
        # The parity of y's low coordinate is invisible to positions 2, 4 and 8
        A = _half(4)
        assert codeword_strategy_accuracy(A, [2, 4, 8]) == 0.5
        assert codeword_strategy_accuracy(A, []) == 0.5

    def test_codeword_strategy_position_bounds(self) -> None:
        with pytest.raises(ValueError, match="out of range"):
            codeword_strategy_accuracy(_half(2), [4])
