from .config import ConfigError, ExperimentConfig, load_config
from .experiments import (
    build_points,
    run_figure1,
    run_r_sweep,
    run_replicating,
    run_table1,
    run_table2,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "build_points",
    "run_table1",
    "run_table2",
    "run_figure1",
    "run_replicating",
    "run_r_sweep",
]
