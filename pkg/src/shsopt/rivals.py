"""Reference PSO, firefly and differential evolution optimizers.

All three follow the textbook forms with their usual defaults and
share the SHS run contract: clamped positions, a best-so-far trace, and
bit-identical results for a given seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .engine import (
    ConfigurationError,
    IterationState,
    ObjectiveSpec,
    RunResult,
    _check_finite,
    make_rng,
)


def _check_budget(pop_size, max_iterations, minimum_pop=1):
    if max_iterations < 1:
        raise ConfigurationError("max_iterations must be >= 1")
    if pop_size < minimum_pop:
        raise ConfigurationError(f"pop_size must be >= {minimum_pop}")


@dataclass(frozen=True)
class PsoParams:
    pop_size: int = 25
    max_iterations: int = 300
    inertia: float = 1.0
    inertia_damp: float = 0.99
    c1: float = 1.5  # personal learning coefficient
    c2: float = 2.0  # global learning coefficient
    velocity_fraction: float = 0.1  # |v| <= fraction * (upper - lower)

    def __post_init__(self):
        _check_budget(self.pop_size, self.max_iterations)


@dataclass(frozen=True)
class FaParams:
    pop_size: int = 25
    max_iterations: int = 300
    gamma: float = 1.0  # light absorption
    beta0: float = 2.0  # attraction at zero distance
    mutation_rate: float = 0.2
    mutation_damp: float = 0.98
    delta_fraction: float = 0.05
    distance_exponent: float = 2.0

    def __post_init__(self):
        _check_budget(self.pop_size, self.max_iterations)


@dataclass(frozen=True)
class DeParams:
    pop_size: int = 25
    max_iterations: int = 300
    f_min: float = 0.2
    f_max: float = 0.8
    crossover_prob: float = 0.2

    def __post_init__(self):
        _check_budget(self.pop_size, self.max_iterations, minimum_pop=4)
        if not 0 <= self.f_min <= self.f_max:
            raise ConfigurationError("scaling factor bounds must satisfy 0 <= f_min <= f_max")
        if not 0 <= self.crossover_prob <= 1:
            raise ConfigurationError("crossover_prob must lie in [0, 1]")


def _init(spec, n, rng):
    X = rng.random((n, spec.dim)) * (spec.upper - spec.lower) + spec.lower
    C = spec.evaluate_many(X)
    _check_finite(C, X)
    return X, C


def _result(trace, best_x, best_c, seed, start):
    return RunResult(trace, best_x, float(best_c), seed, time.perf_counter() - start)


def pso_optimize(
    spec: ObjectiveSpec,
    params: PsoParams = PsoParams(),
    rng=None,
    seed: Optional[int] = None,
    on_iteration: Optional[Callable[[IterationState], None]] = None,
) -> RunResult:
    """Global-best PSO with damped inertia and velocity clamping.

    Velocity components that would carry a particle out of the box are
    reflected after clamping the position.
    """
    rng = make_rng(0 if seed is None else seed) if rng is None else rng
    start = time.perf_counter()
    n, dim = params.pop_size, spec.dim
    vmax = params.velocity_fraction * (spec.upper - spec.lower)

    X, C = _init(spec, n, rng)
    V = np.zeros_like(X)
    P, PC = X.copy(), C.copy()
    g = int(np.argmin(PC))
    gx, gc = P[g].copy(), float(PC[g])
    w = params.inertia
    trace = np.empty(params.max_iterations)

    for t in range(params.max_iterations):
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        V = w * V + params.c1 * r1 * (P - X) + params.c2 * r2 * (gx - X)
        V = np.clip(V, -vmax, vmax)
        X = X + V
        out = (X < spec.lower) | (X > spec.upper)
        V[out] = -V[out]
        X = spec.clip(X)
        C = spec.evaluate_many(X)
        _check_finite(C, X)
        improved = C < PC
        P[improved], PC[improved] = X[improved], C[improved]
        g = int(np.argmin(PC))
        if PC[g] < gc:
            gx, gc = P[g].copy(), float(PC[g])
        trace[t] = gc
        w *= params.inertia_damp
        if on_iteration is not None:
            on_iteration(IterationState(t, X.copy(), C.copy(), gc, w))

    return _result(trace, gx, gc, seed, start)


def fa_optimize(
    spec: ObjectiveSpec,
    params: FaParams = FaParams(),
    rng=None,
    seed: Optional[int] = None,
    on_iteration: Optional[Callable[[IterationState], None]] = None,
) -> RunResult:
    """Firefly algorithm.

    Each firefly moves toward every brighter one with attraction
    ``beta0 * exp(-gamma * r**m)`` (r scaled by the box diagonal), a
    per-coordinate random step factor and a damped uniform mutation. Each
    firefly's best move joins the population; the merged swarm is
    truncated back to ``pop_size``.
    """
    rng = make_rng(0 if seed is None else seed) if rng is None else rng
    start = time.perf_counter()
    n, dim = params.pop_size, spec.dim
    delta = params.delta_fraction * (spec.upper - spec.lower)
    diag = float(np.linalg.norm(spec.upper - spec.lower)) or 1.0

    X, C = _init(spec, n, rng)
    order = np.argsort(C, kind="stable")
    X, C = X[order], C[order]
    best_x, best_c = X[0].copy(), float(C[0])
    alpha = params.mutation_rate
    trace = np.empty(params.max_iterations)

    for t in range(params.max_iterations):
        ii, jj = np.nonzero(C[None, :] < C[:, None])
        if ii.size:
            diff = X[jj] - X[ii]
            r = np.sqrt(np.einsum("ij,ij->i", diff, diff)) / diag
            beta = params.beta0 * np.exp(-params.gamma * r**params.distance_exponent)
            step = beta[:, None] * rng.random((ii.size, dim))
            e = delta * (2.0 * rng.random((ii.size, dim)) - 1.0)
            cand = spec.clip(X[ii] + step * diff + alpha * e)
            cost = spec.evaluate_many(cand)
            _check_finite(cost, cand)
            pick_order = np.lexsort((np.arange(ii.size), cost, ii))
            first = np.ones(pick_order.size, dtype=bool)
            first[1:] = ii[pick_order[1:]] != ii[pick_order[:-1]]
            pick = pick_order[first]
            allX = np.vstack([X, cand[pick]])
            allC = np.concatenate([C, cost[pick]])
            keep = np.argsort(allC, kind="stable")[:n]
            X, C = allX[keep], allC[keep]
        if C[0] < best_c:
            best_x, best_c = X[0].copy(), float(C[0])
        trace[t] = best_c
        alpha *= params.mutation_damp
        if on_iteration is not None:
            on_iteration(IterationState(t, X.copy(), C.copy(), best_c, alpha))

    return _result(trace, best_x, best_c, seed, start)


def de_crossover(target: np.ndarray, mutant: np.ndarray, crossover_prob: float, rng) -> np.ndarray:
    """Binomial crossover; at least one coordinate always comes from the mutant."""
    n, dim = target.shape
    mask = rng.random((n, dim)) <= crossover_prob
    forced = rng.integers(0, dim, size=n)
    mask[np.arange(n), forced] = True
    return np.where(mask, mutant, target)


def de_optimize(
    spec: ObjectiveSpec,
    params: DeParams = DeParams(),
    rng=None,
    seed: Optional[int] = None,
    on_iteration: Optional[Callable[[IterationState], None]] = None,
) -> RunResult:
    """DE/rand/1/bin with per-coordinate scaling factors and greedy selection."""
    rng = make_rng(0 if seed is None else seed) if rng is None else rng
    start = time.perf_counter()
    n, dim = params.pop_size, spec.dim

    X, C = _init(spec, n, rng)
    g = int(np.argmin(C))
    best_x, best_c = X[g].copy(), float(C[g])
    trace = np.empty(params.max_iterations)

    for t in range(params.max_iterations):
        # three distinct donors per target, none equal to the target
        donors = np.empty((n, 3), dtype=int)
        for i in range(n):
            others = rng.permutation(n - 1)[:3]
            donors[i] = others + (others >= i)
        a, b, c = X[donors[:, 0]], X[donors[:, 1]], X[donors[:, 2]]
        F = rng.uniform(params.f_min, params.f_max, size=(n, dim))
        mutant = spec.clip(a + F * (b - c))
        trial = de_crossover(X, mutant, params.crossover_prob, rng)
        cost = spec.evaluate_many(trial)
        _check_finite(cost, trial)
        better = cost < C
        X[better], C[better] = trial[better], cost[better]
        g = int(np.argmin(C))
        if C[g] < best_c:
            best_x, best_c = X[g].copy(), float(C[g])
        trace[t] = best_c
        if on_iteration is not None:
            on_iteration(IterationState(t, X.copy(), C.copy(), best_c, 0.0))

    return _result(trace, best_x, best_c, seed, start)
