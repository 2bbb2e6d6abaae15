"""Tester configuration and outcome records."""

import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Verdict = Literal["accept", "reject"]
QueryKind = Literal["classical", "quantum"]

_U64_MAX = (1 << 64) - 1


def default_blr_rounds(epsilon: float, multiplier: float = 2.0) -> int:
    """Rounds ``k = ceil(multiplier / epsilon)``.

    The quotient is rounded to 9 places first so ``2 / 0.1`` is 20, not 21.

    Examples:
        >>> default_blr_rounds(0.1)
        20
    """
    return max(1, math.ceil(round(multiplier / epsilon, 9)))


class TesterConfig(BaseModel):
    """Parameters shared by all testers.

    Attributes:
        epsilon: Distance parameter in (0, 1).
        blr_rounds: Number of BLR (or classical spot-check) rounds; defaults to
            ``ceil(blr_multiplier / epsilon)``.
        blr_multiplier: Constant c in the default round count.
        generic_constant: Constant c in the generic tester's
            ``ceil(c (ln s + 1) / epsilon)`` query count.
        repetition_multiplier: Constant in the Simon repetition limit
            ``ceil(c log2(n) / epsilon^2)``.
        seed: 64-bit seed of the run's generator.
    """

    __test__ = False  # not a pytest class

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(..., gt=0.0, lt=1.0, description="Distance parameter")
    blr_rounds: int | None = Field(default=None, ge=1, description="BLR / spot-check rounds")
    blr_multiplier: float = Field(default=2.0, gt=0.0)
    generic_constant: float = Field(default=2.0, gt=0.0)
    repetition_multiplier: float = Field(default=2.0, gt=0.0)
    seed: int = Field(default=0, ge=0, le=_U64_MAX, description="Generator seed")

    @model_validator(mode="before")
    @classmethod
    def fill_blr_rounds(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("blr_rounds") is None:
            epsilon = data.get("epsilon")
            if isinstance(epsilon, int | float) and 0 < epsilon < 1:
                multiplier = float(data.get("blr_multiplier", 2.0))
                if multiplier > 0:
                    data = {**data, "blr_rounds": default_blr_rounds(epsilon, multiplier)}
        return data

    @property
    def rounds(self) -> int:
        if self.blr_rounds is None:
            raise ValueError("blr_rounds was not resolved")
        return self.blr_rounds


class QueryRecord(BaseModel):
    """One oracle access: a classical position read or a quantum invocation."""

    model_config = ConfigDict(frozen=True)

    kind: QueryKind
    position: int | None = Field(default=None, ge=0, description="Position read (classical)")


class TestOutcome(BaseModel):
    """Verdict of one tester run together with its query log.

    ``queries`` always equals the transcript length.
    """

    __test__ = False  # not a pytest class

    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    queries: int = Field(..., ge=0)
    transcript: tuple[QueryRecord, ...] = ()
    detail: str = ""

    @model_validator(mode="after")
    def check_query_count(self) -> "TestOutcome":
        if self.queries != len(self.transcript):
            raise ValueError(
                f"queries ({self.queries}) does not match transcript length ({len(self.transcript)})"
            )
        return self

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


class SimonOutcome(TestOutcome):
    """Main-program outcome with the basis it ended on.

    Attributes:
        basis: Labels of the basis vectors found, in extension order.
        zero_streak: Length of the final run of zero outcomes (0 when rejected).
    """

    basis: tuple[str, ...] = ()
    zero_streak: int = Field(default=0, ge=0)

    @field_validator("basis")
    @classmethod
    def validate_labels(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        for label in v:
            if not label or set(label) - {"0", "1"}:
                raise ValueError(f"Basis label {label!r} is not a bit string")
        return v
