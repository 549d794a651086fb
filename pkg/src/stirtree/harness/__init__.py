from .experiments import (
    ConfigError,
    ExperimentConfig,
    experiment_adp,
    experiment_pmf,
    experiment_subtree,
    experiment_trapezoidal,
    run_experiment,
)
from .verify import verify

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "experiment_adp",
    "experiment_pmf",
    "experiment_subtree",
    "experiment_trapezoidal",
    "run_experiment",
    "verify",
]
