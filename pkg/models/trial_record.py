"""Persisted experiment records and their aggregates."""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.tester import Verdict


class TrialRecord(BaseModel):
    """One tester run, the persistence unit of every experiment.

    Attributes:
        experiment: Experiment id (e.g. ``separation``, ``simon-members``).
        config: Configuration label grouping trials into one summary row.
        trial: Trial index within the configuration.
        n: Input length parameter as the tester sees it (string length for
            Hadamard-code inputs, domain bits for Simon inputs).
        eps: Distance parameter (None for experiments without one).
        mode: Tester or strategy name.
        input_kind: ``member``, ``far`` or ``given``.
        seed: Derived per-trial seed.
        verdict: Tester verdict.
        queries: Oracle accesses, equal to the tester transcript length.
        params: Extra configuration values (rounds, repetition limit, ...).
        wall_time_s: Elapsed seconds, only when timing is enabled.
    """

    model_config = ConfigDict(frozen=True)

    experiment: str = Field(..., min_length=1)
    config: str = Field(default="")
    trial: int = Field(..., ge=0)
    n: int = Field(..., ge=1)
    eps: float | None = Field(default=None, gt=0.0, lt=1.0)
    mode: str = Field(..., min_length=1)
    input_kind: str = Field(default="given")
    seed: int = Field(..., ge=0)
    verdict: Verdict
    queries: int = Field(..., ge=0)
    params: dict[str, Any] = Field(default_factory=dict)
    wall_time_s: float | None = Field(default=None, ge=0.0)

    @field_validator("experiment", "mode")
    @classmethod
    def validate_non_empty_strings(cls, v: str) -> str:
        stripped = v.strip()
        if not stripped:
            raise ValueError("Field cannot be empty or whitespace")
        return stripped

    @property
    def group_key(self) -> tuple[str, str, int, float | None, str, str]:
        return (self.experiment, self.config, self.n, self.eps, self.mode, self.input_kind)


class ExperimentSummary(BaseModel):
    """Aggregate over the trials of one configuration.

    Attributes:
        trials: Number of trials.
        accepts: Number of accepting trials.
        accept_rate: ``accepts / trials``.
        ci_low: Lower end of the 95% Wilson interval.
        ci_high: Upper end of the 95% Wilson interval.
        mean_queries: Mean query count.
        max_queries: Maximum query count.
        min_queries: Minimum query count.
        extra: Experiment-specific aggregates (bias, collision rate, bounds).
    """

    model_config = ConfigDict(frozen=True)

    experiment: str
    config: str = ""
    n: int = Field(..., ge=1)
    eps: float | None = Field(default=None, gt=0.0, lt=1.0)
    mode: str
    input_kind: str = "given"
    trials: int = Field(..., ge=0)
    accepts: int = Field(..., ge=0)
    accept_rate: float = Field(..., ge=0.0, le=1.0)
    ci_low: float = Field(..., ge=0.0, le=1.0)
    ci_high: float = Field(..., ge=0.0, le=1.0)
    mean_queries: float = Field(..., ge=0.0)
    max_queries: int = Field(..., ge=0)
    min_queries: int = Field(..., ge=0)
    extra: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_interval(self) -> "ExperimentSummary":
        if self.accepts > self.trials:
            raise ValueError(f"accepts ({self.accepts}) exceeds trials ({self.trials})")
        if not self.ci_low <= self.accept_rate <= self.ci_high:
            raise ValueError(
                f"Interval [{self.ci_low}, {self.ci_high}] misses point estimate {self.accept_rate}"
            )
        return self

    @property
    def reject_rate(self) -> float:
        return 1.0 - self.accept_rate
