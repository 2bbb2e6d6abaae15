"""Tests for TrialRecord and ExperimentSummary."""

from typing import Any

import pytest
from pydantic import ValidationError

from models.trial_record import ExperimentSummary, TrialRecord


def _record(**overrides: Any) -> TrialRecord:
    data: dict[str, Any] = {
        "experiment": "separation",
        "config": "n=8,eps=0.1",
        "trial": 0,
        "n": 8,
        "eps": 0.1,
        "mode": "quantum",
        "input_kind": "member",
        "seed": 42,
        "verdict": "accept",
        "queries": 61,
    }
    data.update(overrides)
    return TrialRecord(**data)


def _summary(**overrides: Any) -> ExperimentSummary:
    data: dict[str, Any] = {
        "experiment": "separation",
        "n": 8,
        "eps": 0.1,
        "mode": "quantum",
        "trials": 10,
        "accepts": 5,
        "accept_rate": 0.5,
        "ci_low": 0.2,
        "ci_high": 0.8,
        "mean_queries": 61.0,
        "max_queries": 61,
        "min_queries": 61,
    }
    data.update(overrides)
    return ExperimentSummary(**data)


class TestTrialRecord:
    """Tests for TrialRecord validation and serialization."""

    def test_json_round_trip(self) -> None:
        # Arrange
        record = _record(params={"rounds": 20}, wall_time_s=0.5)

        # Act
        restored = TrialRecord.model_validate_json(record.model_dump_json())

        # Assert
        assert restored == record

    def test_eps_optional(self) -> None:
        assert _record(eps=None).eps is None

    def test_strips_experiment(self) -> None:
        assert _record(experiment="  bias  ").experiment == "bias"

    @pytest.mark.parametrize(
        "overrides",
        [{"experiment": "   "}, {"n": 0}, {"queries": -1}, {"eps": 1.0}, {"verdict": "pass"}, {"seed": -3}],
    )
    def test_invalid_fields(self, overrides: dict[str, Any]) -> None:
        with pytest.raises(ValidationError):
            _record(**overrides)

    def test_group_key(self) -> None:
        assert _record().group_key == ("separation", "n=8,eps=0.1", 8, 0.1, "quantum", "member")


class TestExperimentSummary:
    """Tests for ExperimentSummary invariants."""

    def test_reject_rate(self) -> None:
        assert _summary().reject_rate == pytest.approx(0.5)

    def test_interval_must_contain_rate(self) -> None:
        with pytest.raises(ValidationError, match="misses point estimate"):
            _summary(ci_low=0.6)

    def test_accepts_bounded_by_trials(self) -> None:
        with pytest.raises(ValidationError, match="exceeds trials"):
            _summary(accepts=11, accept_rate=1.0, ci_high=1.0)

    def test_rate_in_unit_interval(self) -> None:
        with pytest.raises(ValidationError):
            _summary(accept_rate=1.5)
