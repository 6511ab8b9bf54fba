# Experiment configuration, worker pool, reports and the four runners
from .config import (
    DEFAULT_SCHEDULE,
    EXPERIMENTS,
    ExperimentConfig,
    HardwareConfig,
    SpaceConfig,
    default_schedule,
    load_experiment_config,
    validate_config,
)
from .pool import run_work_items
from .report import ReportWriter
from .runners import (
    RUNNERS,
    RunResult,
    log_mean_reference,
    run_bergman_comparison,
    run_determinant,
    run_experiment,
    run_folner,
    run_szego,
    weight_ratio,
)

__all__ = [
    "DEFAULT_SCHEDULE",
    "EXPERIMENTS",
    "ExperimentConfig",
    "HardwareConfig",
    "SpaceConfig",
    "default_schedule",
    "load_experiment_config",
    "validate_config",
    "run_work_items",
    "ReportWriter",
    "RUNNERS",
    "RunResult",
    "log_mean_reference",
    "run_bergman_comparison",
    "run_determinant",
    "run_experiment",
    "run_folner",
    "run_szego",
    "weight_ratio",
]
