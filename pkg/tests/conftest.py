"""Shared pytest fixtures for the qpt lab test suite.

Fixtures include a mock configuration, a temporary config file, seeded
random generators and small Boolean functions inside and outside Simon's
language.
"""

import json
from pathlib import Path
from typing import Any
from unittest.mock import Mock

import numpy as np
import pytest

from models.bits import BooleanFunction

TEST_CONFIG: dict[str, Any] = {
    "qpt": {"seed": 1234, "workers": 1, "trials": 5},
    "hadamard": {"blr_multiplier": 2.0, "generic_constant": 2.0},
    "simon": {"repetition_multiplier": 2.0, "exact_max_n": 3, "reuse_prepared_state": True},
    "dwise": {"max_property_length": 20, "max_verify_length": 15, "max_verify_degree": 6},
    "experiment": {"batch_size": 4, "record_timing": False},
    "logging": {"level": "INFO"},
}


@pytest.fixture
def mock_config() -> Mock:
    """Mock ConfigService answering ``get`` and the typed getters from TEST_CONFIG.

    Examples:
        >>> def test_example(mock_config: Mock) -> None:
        ...     assert mock_config.get_default_seed() == 1234
    """
    mock = Mock()

    def mock_get(path: str, default: Any = None) -> Any:
        ref: Any = TEST_CONFIG
        for part in path.split("."):
            if not isinstance(ref, dict) or part not in ref:
                return default
            ref = ref[part]
        return ref

    mock.get.side_effect = mock_get
    mock.as_dict.return_value = TEST_CONFIG
    mock.get_default_seed.return_value = 1234
    mock.get_default_trials.return_value = 5
    mock.get_workers.return_value = 1
    mock.get_batch_size.return_value = 4
    mock.get_record_timing.return_value = False
    mock.get_blr_multiplier.return_value = 2.0
    mock.get_generic_constant.return_value = 2.0
    mock.get_repetition_multiplier.return_value = 2.0
    mock.get_exact_max_n.return_value = 3
    mock.get_reuse_prepared_state.return_value = True
    mock.get_dwise_limits.return_value = dict(TEST_CONFIG["dwise"])
    mock.get_log_level.return_value = "INFO"
    return mock


@pytest.fixture
def temp_config_file(tmp_path: Path) -> Path:
    """Config file with the test configuration written to a temp directory."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps(TEST_CONFIG), encoding="utf-8")
    return path


@pytest.fixture
def rng() -> np.random.Generator:
    """Generator with a fixed seed."""
    return np.random.default_rng(20240601)


@pytest.fixture
def simon_member() -> BooleanFunction:
    """f(x) = x_2 on 3 bits, invariant under every shift with x_2 = 0."""
    return BooleanFunction.from_array([(x >> 2) & 1 for x in range(8)])


@pytest.fixture
def simon_nonmember() -> BooleanFunction:
    """Indicator of x = 0 on 3 bits: no nonzero shift leaves it unchanged, distance 1 from L."""
    return BooleanFunction.from_array([1, 0, 0, 0, 0, 0, 0, 0])
