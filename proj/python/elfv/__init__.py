"""Python bindings for the EL FV Burgers solver."""

from ._elfv import (
    Boundary,
    BoundsMode,
    Error,
    ErrorNorm,
    ExperimentConfig,
    Grid1D,
    InvalidArgument,
    MergingMode,
    RunSummary,
    SchemeConfig,
    convergence_study,
    load_config,
    numerical_flux,
    parse_config,
    run_experiment,
    step,
    time_step,
    total_variation,
    verify_theory,
)
from .csvio import SCHEMAS, SchemaError, read_csv

__all__ = [
    "Boundary",
    "BoundsMode",
    "Error",
    "ErrorNorm",
    "ExperimentConfig",
    "Grid1D",
    "InvalidArgument",
    "MergingMode",
    "RunSummary",
    "SCHEMAS",
    "SchemaError",
    "SchemeConfig",
    "convergence_study",
    "load_config",
    "numerical_flux",
    "parse_config",
    "read_csv",
    "run_experiment",
    "step",
    "time_step",
    "total_variation",
    "verify_theory",
]
