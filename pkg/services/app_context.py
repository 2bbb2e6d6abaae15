"""Application context for dependency injection."""

from dataclasses import dataclass
from pathlib import Path

from services.config_service import ConfigService


@dataclass
class AppContext:
    """Configuration plus the per-invocation options of the root CLI group.

    CLI flags take precedence over the config file, which already carries any
    ``SECTION_KEY`` environment overrides.

    Attributes:
        config: Configuration service instance.
        seed: Master seed from ``--seed`` (None falls back to config).
        trials: Trials per configuration from ``--trials``.
        workers: Worker processes from ``--workers``.
        out: JSON Lines destination for trial records.
        csv: CSV projection destination.
        json_output: Emit machine-readable JSON on stdout.
    """

    config: ConfigService
    seed: int | None = None
    trials: int | None = None
    workers: int | None = None
    out: Path | None = None
    csv: Path | None = None
    json_output: bool = False

    @classmethod
    def create(cls, config_path: str = "resources/config.json") -> "AppContext":
        """Create application context with configuration.

        Raises:
            FileNotFoundError: If config file doesn't exist.
            json.JSONDecodeError: If config file is malformed.
        """
        return cls(config=ConfigService(config_path))

    @property
    def effective_seed(self) -> int:
        return self.seed if self.seed is not None else self.config.get_default_seed()

    @property
    def effective_trials(self) -> int:
        return self.trials if self.trials is not None else self.config.get_default_trials()

    @property
    def effective_workers(self) -> int:
        return self.workers if self.workers is not None else self.config.get_workers()
