from .config import EXPERIMENTS, ConfigError, ExperimentConfig
from .manifest import RunManifest
from .runners import (
    RUNNERS,
    run_bounds_audit,
    run_experiment,
    run_perconv_recon,
    run_rate_study,
    run_wave_adversarial,
    run_wave_regularized,
)

__all__ = [
    "EXPERIMENTS",
    "ConfigError",
    "ExperimentConfig",
    "RunManifest",
    "RUNNERS",
    "run_experiment",
    "run_wave_adversarial",
    "run_wave_regularized",
    "run_perconv_recon",
    "run_rate_study",
    "run_bounds_audit",
]
