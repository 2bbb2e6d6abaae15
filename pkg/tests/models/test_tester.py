"""Tests for tester configuration and outcome models."""

import pytest
from pydantic import ValidationError

from models.tester import QueryRecord, SimonOutcome, TestOutcome, TesterConfig, default_blr_rounds


class TestDefaultRounds:
    """Tests for the BLR round count."""

    @pytest.mark.parametrize(
        ("eps", "multiplier", "expected"),
        [(0.1, 2.0, 20), (0.125, 2.0, 16), (0.3, 2.0, 7), (0.5, 1.0, 2), (0.99, 0.5, 1)],
    )
    def test_rounds(self, eps: float, multiplier: float, expected: int) -> None:
        assert default_blr_rounds(eps, multiplier) == expected


class TestTesterConfig:
    """Tests for TesterConfig validation."""

    def test_rounds_filled_from_epsilon(self) -> None:
        # Act
        cfg = TesterConfig(epsilon=0.1)

        # Assert
        assert cfg.blr_rounds == 20
        assert cfg.rounds == 20

    def test_multiplier_changes_rounds(self) -> None:
        assert TesterConfig(epsilon=0.1, blr_multiplier=3.0).rounds == 30

    def test_explicit_rounds_kept(self) -> None:
        assert TesterConfig(epsilon=0.1, blr_rounds=4).rounds == 4

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5, 1.5])
    def test_epsilon_bounds(self, eps: float) -> None:
        with pytest.raises(ValidationError):
            TesterConfig(epsilon=eps)

    def test_seed_must_be_u64(self) -> None:
        with pytest.raises(ValidationError):
            TesterConfig(epsilon=0.1, seed=1 << 64)

    def test_frozen(self) -> None:
        cfg = TesterConfig(epsilon=0.1)
        with pytest.raises(ValidationError):
            cfg.epsilon = 0.2  # type: ignore[misc]


class TestOutcomes:
    """Tests for TestOutcome and SimonOutcome."""

    def test_queries_must_match_transcript(self) -> None:
        # Arrange
        transcript = (QueryRecord(kind="classical", position=3),)

        # Act & Assert
        with pytest.raises(ValidationError, match="does not match transcript"):
            TestOutcome(verdict="accept", queries=2, transcript=transcript)

    def test_accepted(self) -> None:
        # Arrange
        transcript = (QueryRecord(kind="quantum"), QueryRecord(kind="classical", position=0))

        # Act
        outcome = TestOutcome(verdict="accept", queries=2, transcript=transcript)

        # Assert
        assert outcome.accepted
        assert not TestOutcome(verdict="reject", queries=0).accepted

    def test_verdict_literal(self) -> None:
        with pytest.raises(ValidationError):
            TestOutcome(verdict="maybe", queries=0)  # type: ignore[arg-type]

    def test_simon_outcome_labels(self) -> None:
        # Act
        outcome = SimonOutcome(verdict="reject", queries=0, basis=("011", "100"))

        # Assert
        assert outcome.basis == ("011", "100")
        with pytest.raises(ValidationError, match="not a bit string"):
            SimonOutcome(verdict="reject", queries=0, basis=("01x",))
