import json
import logging
import os
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

_U64_MAX = (1 << 64) - 1
_ALLOWED_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
_TRUE_VALUES = {"1", "true", "yes", "on"}
_FALSE_VALUES = {"0", "false", "no", "off"}


class ConfigService:
    """Service for loading and managing lab configuration.

    Supports JSON-based configuration with environment variable overrides.
    Environment variables follow the pattern: SECTION_KEY (e.g., QPT_SEED
    overrides qpt.seed, SIMON_REPETITION_MULTIPLIER overrides
    simon.repetition_multiplier). Overrides arrive as strings; the typed
    getters parse and validate them.
    """

    def __init__(self, config_path: str = "resources/config.json") -> None:
        """Initialize configuration service.

        Args:
            config_path: Path to JSON configuration file.

        Raises:
            FileNotFoundError: If config file doesn't exist.
            json.JSONDecodeError: If config file is malformed.
        """
        self._config_path = Path(config_path)
        self._config: dict[str, Any] = {}
        self.load()

    def load(self) -> None:
        """Load configuration from file and apply environment overrides.

        Raises:
            FileNotFoundError: If config file doesn't exist.
            json.JSONDecodeError: If config file is malformed.
        """
        if not self._config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self._config_path}")

        try:
            with self._config_path.open(encoding="utf-8") as f:
                self._config = json.load(f)
            logger.info(f"Loaded configuration from {self._config_path}")
        except json.JSONDecodeError as e:
            logger.error(f"Failed to parse config file {self._config_path}: {e}")
            raise

        self.apply_env_overrides()

    def apply_env_overrides(self) -> None:
        """Override config values with matching environment variables.

        Example: QPT_WORKERS overrides qpt.workers.
        """
        override_count = 0
        for section, values in self._config.items():
            if not isinstance(values, dict):
                continue
            for key in values:
                env_key = f"{section.upper()}_{key.upper()}"
                if env_key in os.environ:
                    old_val = values[key]
                    values[key] = os.environ[env_key]
                    logger.debug(f"Override {section}.{key}: {old_val} -> {os.environ[env_key]}")
                    override_count += 1

        if override_count > 0:
            logger.info(f"Applied {override_count} environment variable overrides")

    def get(self, path: str, default: Any = None) -> Any:
        """Access nested config using dot notation.

        Args:
            path: Dot-separated path to config value (e.g., 'simon.exact_max_n').
            default: Default value if path doesn't exist.

        Returns:
            Configuration value at the specified path, or default if not found.

        Examples:
            >>> config.get('qpt.workers')
            1
            >>> config.get('missing.key', 'fallback')
            'fallback'
        """
        ref: Any = self._config
        for part in path.split("."):
            if not isinstance(ref, dict) or part not in ref:
                return default
            ref = ref[part]
        return ref

    def as_dict(self) -> dict[str, Any]:
        """Return complete configuration as dictionary."""
        return self._config.copy()

    # Typed accessors

    def _get_int(self, path: str, default: int, minimum: int, maximum: int | None = None) -> int:
        value = self.get(path, default)
        try:
            parsed = int(value)
        except (TypeError, ValueError) as e:
            raise ValueError(f"Invalid {path} '{value}'. Must be an integer.") from e
        if parsed < minimum or (maximum is not None and parsed > maximum):
            bound = f"between {minimum} and {maximum}" if maximum is not None else f">= {minimum}"
            raise ValueError(f"Invalid {path} {parsed}. Must be {bound}.")
        return parsed

    def _get_positive_float(self, path: str, default: float) -> float:
        value = self.get(path, default)
        try:
            parsed = float(value)
        except (TypeError, ValueError) as e:
            raise ValueError(f"Invalid {path} '{value}'. Must be a number.") from e
        if parsed <= 0:
            raise ValueError(f"Invalid {path} {parsed}. Must be positive.")
        return parsed

    def _get_bool(self, path: str, default: bool) -> bool:
        value = self.get(path, default)
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in _TRUE_VALUES:
            return True
        if text in _FALSE_VALUES:
            return False
        raise ValueError(f"Invalid {path} '{value}'. Must be a boolean.")

    def get_default_seed(self) -> int:
        """Master seed used when no ``--seed`` is given.

        Raises:
            ValueError: If the seed is not an unsigned 64-bit integer.

        Examples:
            >>> config.get_default_seed()
            20240601
        """
        return self._get_int("qpt.seed", 0, 0, _U64_MAX)

    def get_workers(self) -> int:
        """Worker processes for experiments (1 runs in-process)."""
        return self._get_int("qpt.workers", 1, 1)

    def get_default_trials(self) -> int:
        return self._get_int("qpt.trials", 100, 1)

    def get_batch_size(self) -> int:
        """Trials per work item handed to the worker pool."""
        return self._get_int("experiment.batch_size", 64, 1)

    def get_record_timing(self) -> bool:
        """Whether trial records carry wall time (which breaks byte-identical output)."""
        return self._get_bool("experiment.record_timing", False)

    def get_blr_multiplier(self) -> float:
        """Constant c in the BLR round count ``ceil(c / epsilon)``."""
        return self._get_positive_float("hadamard.blr_multiplier", 2.0)

    def get_generic_constant(self) -> float:
        """Constant c in the generic tester's ``ceil(c (ln s + 1) / epsilon)``."""
        return self._get_positive_float("hadamard.generic_constant", 2.0)

    def get_repetition_multiplier(self) -> float:
        """Constant c in the Simon repetition limit ``ceil(c log2(n) / epsilon^2)``."""
        return self._get_positive_float("simon.repetition_multiplier", 2.0)

    def get_exact_max_n(self) -> int:
        """Largest n for exact acceptance-probability analysis."""
        return self._get_int("simon.exact_max_n", 3, 1, 5)

    def get_reuse_prepared_state(self) -> bool:
        return self._get_bool("simon.reuse_prepared_state", True)

    def get_dwise_limits(self) -> dict[str, int]:
        """Size guards for materializing and exhaustively checking d-wise spaces.

        Returns:
            Mapping with ``max_property_length``, ``max_verify_length`` and
            ``max_verify_degree``.
        """
        return {
            "max_property_length": self._get_int("dwise.max_property_length", 20, 1, 20),
            "max_verify_length": self._get_int("dwise.max_verify_length", 15, 1, 15),
            "max_verify_degree": self._get_int("dwise.max_verify_degree", 6, 1, 6),
        }

    def get_log_level(self) -> str:
        """Logging level name.

        Raises:
            ValueError: If the level is not a standard logging level.
        """
        value = str(self.get("logging.level", "INFO")).upper()
        if value not in _ALLOWED_LOG_LEVELS:
            raise ValueError(
                f"Invalid logging.level '{value}'. "
                f"Must be one of: {', '.join(sorted(_ALLOWED_LOG_LEVELS))}"
            )
        return value
