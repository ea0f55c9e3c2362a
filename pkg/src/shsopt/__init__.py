"""Scorpion hunting strategy optimizer with benchmarks, rivals and statistics."""

from .benchmarks import TABLE3_BOUNDS, list_benchmarks, make_benchmark
from .engine import (
    ConfigurationError,
    ObjectiveError,
    ObjectiveSpec,
    RunResult,
    ShsParams,
    make_rng,
    shs_optimize,
)
from .penalty import ConstraintSet, penalize
from .registry import OPTIMIZERS, run_optimizer

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ConstraintSet",
    "OPTIMIZERS",
    "ObjectiveError",
    "ObjectiveSpec",
    "RunResult",
    "ShsParams",
    "TABLE3_BOUNDS",
    "list_benchmarks",
    "make_benchmark",
    "make_rng",
    "penalize",
    "run_optimizer",
    "shs_optimize",
]
