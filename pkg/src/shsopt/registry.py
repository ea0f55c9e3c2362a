"""Name-based lookup of optimizers."""

from __future__ import annotations

import dataclasses
from typing import Optional

from .engine import ConfigurationError, ObjectiveSpec, RunResult, ShsParams, shs_optimize
from .rivals import DeParams, FaParams, PsoParams, de_optimize, fa_optimize, pso_optimize

OPTIMIZERS = {
    "shs": (shs_optimize, ShsParams),
    "pso": (pso_optimize, PsoParams),
    "fa": (fa_optimize, FaParams),
    "de": (de_optimize, DeParams),
}

# recognized names that have no implementation here
KNOWN_UNIMPLEMENTED = ("ga", "bbo", "abc", "tlbo", "aco", "hs", "sa", "ba", "iwo")


def check_optimizer(name: str) -> None:
    if name in OPTIMIZERS:
        return
    hint = " (known algorithm, not implemented)" if name in KNOWN_UNIMPLEMENTED else ""
    raise ConfigurationError(
        f"unknown optimizer {name!r}{hint}; available: {', '.join(OPTIMIZERS)}"
    )


def make_params(name: str, pop_size: Optional[int] = None, max_iterations: Optional[int] = None, **extra):
    check_optimizer(name)
    cls = OPTIMIZERS[name][1]
    kwargs = dict(extra)
    if pop_size is not None:
        kwargs["pop_size"] = pop_size
    if max_iterations is not None:
        kwargs["max_iterations"] = max_iterations
    return cls(**kwargs)


def run_optimizer(
    name: str,
    spec: ObjectiveSpec,
    seed: int,
    pop_size: Optional[int] = None,
    max_iterations: Optional[int] = None,
    **extra,
) -> RunResult:
    func = OPTIMIZERS[name][0] if name in OPTIMIZERS else None
    params = make_params(name, pop_size, max_iterations, **extra)
    return func(spec, params, seed=seed)


def params_dict(params) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in dataclasses.asdict(params).items()}
