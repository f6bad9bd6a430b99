"""Experiment harness: JSON configs, the checks matrix, run artifacts and the command line."""
from .checks import CHECK_CONFIGS, CellResult, CheckContext
from .config import ExperimentConfig, default_config, dump_config, load_config
from .runner import RunOutcome, compare, load_summary, run, solve_only

__all__ = [
    "CHECK_CONFIGS",
    "CellResult",
    "CheckContext",
    "ExperimentConfig",
    "RunOutcome",
    "compare",
    "default_config",
    "dump_config",
    "load_config",
    "load_summary",
    "run",
    "solve_only",
]
