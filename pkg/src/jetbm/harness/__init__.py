"""Configuration, verification-suite runner, sweeps, and the CLI."""

from .checks import SWEEP_FIELDS, SuiteResult, parse_grid, run_verify, sweep
from .config import RunConfig, default_config, parse_config

__all__ = [
    "RunConfig",
    "parse_config",
    "default_config",
    "SuiteResult",
    "run_verify",
    "sweep",
    "parse_grid",
    "SWEEP_FIELDS",
]
