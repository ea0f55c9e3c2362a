"""Economic load dispatch with transmission losses.

Generator outputs are the decision vector. Fuel cost is quadratic per unit,
losses follow the B-coefficient form ``PL = P^T B P``, and the power
balance ``PT - PL - PD = 0`` is enforced through the exterior penalty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import ConfigurationError, ObjectiveSpec
from ..penalty import DEFAULT_PENALTY_WEIGHT, ConstraintSet, penalize

# Three-unit test system. Cost and loss coefficients are the common
# textbook three-unit values.
DEFAULT_P_MIN = (100.0, 50.0, 80.0)
DEFAULT_P_MAX = (500.0, 200.0, 300.0)
DEFAULT_DEMAND = 900.0
DEFAULT_COST_COEFFS = ((561.0, 7.92, 0.001562), (310.0, 7.85, 0.00194), (78.0, 7.97, 0.00482))
DEFAULT_LOSS_MATRIX = np.diag([3e-5, 9e-5, 12e-5])


@dataclass(frozen=True)
class EdInstance:
    p_min: np.ndarray
    p_max: np.ndarray
    demand: float
    cost_coeffs: np.ndarray  # (n, 3) rows of a, b, c
    loss_matrix: np.ndarray  # (n, n)
    name: str = "ed"

    def __post_init__(self):
        lo = np.asarray(self.p_min, dtype=float)
        hi = np.asarray(self.p_max, dtype=float)
        coeffs = np.asarray(self.cost_coeffs, dtype=float)
        B = np.asarray(self.loss_matrix, dtype=float)
        n = lo.size
        if lo.ndim != 1 or hi.shape != lo.shape or n == 0:
            raise ConfigurationError("p_min and p_max must be equal-length vectors")
        if np.any(lo > hi):
            raise ConfigurationError("p_min must not exceed p_max")
        if not self.demand > 0:
            raise ConfigurationError("demand must be positive")
        if hi.sum() < self.demand:
            raise ConfigurationError(
                f"infeasible instance: total capacity {hi.sum():g} MW is below demand {self.demand:g} MW"
            )
        if coeffs.shape != (n, 3):
            raise ConfigurationError(f"cost_coeffs must have shape ({n}, 3), got {coeffs.shape}")
        if B.shape != (n, n):
            raise ConfigurationError(f"loss_matrix must have shape ({n}, {n}), got {B.shape}")
        if not np.allclose(B, B.T):
            raise ConfigurationError("loss_matrix must be symmetric")
        for key, val in (("p_min", lo), ("p_max", hi), ("cost_coeffs", coeffs), ("loss_matrix", B)):
            object.__setattr__(self, key, val)
        object.__setattr__(self, "demand", float(self.demand))

    @property
    def n_units(self) -> int:
        return self.p_min.size


def default_ed_instance() -> EdInstance:
    return EdInstance(
        np.array(DEFAULT_P_MIN),
        np.array(DEFAULT_P_MAX),
        DEFAULT_DEMAND,
        np.array(DEFAULT_COST_COEFFS),
        DEFAULT_LOSS_MATRIX.copy(),
        name="paper-ed-3gen",
    )


def fuel_cost(inst: EdInstance, P: np.ndarray) -> np.ndarray:
    a, b, c = inst.cost_coeffs.T
    return np.sum(a + b * P + c * P**2, axis=-1)


def losses(inst: EdInstance, P: np.ndarray) -> np.ndarray:
    return np.einsum("...i,ij,...j->...", P, inst.loss_matrix, P)


def balance_error(inst: EdInstance, P: np.ndarray) -> np.ndarray:
    """PT - PL - PD, the signed power mismatch."""
    return np.sum(P, axis=-1) - losses(inst, P) - inst.demand


def ed_objective(inst: EdInstance, penalty_weight: float = DEFAULT_PENALTY_WEIGHT) -> ObjectiveSpec:
    base = ObjectiveSpec(
        name=f"ed:{inst.name}",
        lower=inst.p_min,
        upper=inst.p_max,
        func=lambda p: float(fuel_cost(inst, np.asarray(p, dtype=float))),
        batch=lambda P: fuel_cost(inst, P),
    )
    balance = ConstraintSet(
        equality=[lambda P: balance_error(inst, P)],
        penalty_weight=penalty_weight,
        vectorized=True,
    )
    return penalize(base, balance)


@dataclass(frozen=True)
class DispatchReport:
    P: np.ndarray
    PT: float
    PL: float
    error: float
    cost: float


def dispatch_report(inst: EdInstance, P) -> DispatchReport:
    P = np.asarray(P, dtype=float)
    return DispatchReport(
        P=P.copy(),
        PT=float(P.sum()),
        PL=float(losses(inst, P)),
        error=float(balance_error(inst, P)),
        cost=float(fuel_cost(inst, P)),
    )
