"""Exterior quadratic penalty for constrained problems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .engine import ConfigurationError, ObjectiveSpec

Constraint = Callable[[np.ndarray], float]

DEFAULT_PENALTY_WEIGHT = 1e6


@dataclass(frozen=True)
class ConstraintSet:
    """Inequalities ``g(x) <= 0`` and equalities ``|h(x)| <= tolerance``.

    With ``vectorized=True`` every constraint map also accepts an ``(m, dim)``
    array and returns ``m`` values, which lets the penalized objective
    evaluate batches.
    """

    inequality: Sequence[Constraint] = field(default_factory=tuple)
    equality: Sequence[Constraint] = field(default_factory=tuple)
    penalty_weight: float = DEFAULT_PENALTY_WEIGHT
    equality_tolerance: float = 0.0
    vectorized: bool = False

    def violation(self, x: np.ndarray) -> float:
        """Sum of squared constraint violations at ``x``."""
        total = 0.0
        for g in self.inequality:
            total += max(0.0, float(g(x))) ** 2
        for h in self.equality:
            total += max(0.0, abs(float(h(x))) - self.equality_tolerance) ** 2
        return total

    def violation_many(self, X: np.ndarray) -> np.ndarray:
        total = np.zeros(len(X))
        for g in self.inequality:
            total += np.maximum(0.0, np.asarray(g(X), dtype=float)) ** 2
        for h in self.equality:
            total += np.maximum(0.0, np.abs(np.asarray(h(X), dtype=float)) - self.equality_tolerance) ** 2
        return total


def penalize(spec: ObjectiveSpec, constraints: ConstraintSet) -> ObjectiveSpec:
    if not constraints.penalty_weight > 0:
        raise ConfigurationError("penalty weight must be positive")
    if constraints.equality_tolerance < 0:
        raise ConfigurationError("equality tolerance must be non-negative")
    rho = constraints.penalty_weight

    def func(x):
        x = np.asarray(x, dtype=float)
        base = spec.evaluate(x)
        v = constraints.violation(x)
        return base if v == 0.0 else base + rho * v

    batch = None
    if constraints.vectorized:

        def batch(X):
            base = spec.evaluate_many(X)
            v = constraints.violation_many(X)
            return np.where(v == 0.0, base, base + rho * v)

    return ObjectiveSpec(
        name=f"{spec.name}+penalty",
        lower=spec.lower,
        upper=spec.upper,
        func=func,
        batch=batch,
        known_optimum=None,
    )
