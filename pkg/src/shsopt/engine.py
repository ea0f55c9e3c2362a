"""Scorpion Hunting Strategy optimizer.

The population moves by pairwise "vibration" interactions. An agent that
senses a better agent (its prey) is attracted toward it with a strength
that decays with distance; with a small, geometrically damped probability
it instead moves toward a random member of the swarm (the alpha-beta
mutation). The global best is tracked across iterations.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class ConfigurationError(ValueError):
    """Invalid problem or optimizer configuration."""


class ObjectiveError(RuntimeError):
    """The objective returned a value the optimizer cannot use."""


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic random stream for one run.

    Uses numpy's PCG64 bit generator, whose output sequence for a given seed
    is fixed across platforms and numpy releases.
    """
    if seed < 0 or seed >= 2**64:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    """A box-bounded minimization problem.

    ``func`` maps one position to a cost. ``batch``, when given, maps an
    ``(m, dim)`` array to ``m`` costs and must agree with ``func`` row by row;
    optimizers use it to evaluate whole candidate sets at once.
    """

    name: str
    lower: np.ndarray
    upper: np.ndarray
    func: Callable[[np.ndarray], float]
    batch: Optional[Callable[[np.ndarray], np.ndarray]] = None
    known_optimum: Optional[tuple[np.ndarray, float]] = None

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ConfigurationError("lower and upper must be vectors of equal length")
        if lower.size == 0:
            raise ConfigurationError("dimension must be positive")
        if np.any(~np.isfinite(lower)) or np.any(~np.isfinite(upper)):
            raise ConfigurationError("bounds must be finite")
        if np.any(lower > upper):
            bad = int(np.argmax(lower > upper))
            raise ConfigurationError(
                f"{self.name}: lower[{bad}]={lower[bad]} exceeds upper[{bad}]={upper[bad]}"
            )
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    def evaluate(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=float)))

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if len(xs) == 0:
            return np.empty(0)
        if self.batch is not None:
            return np.asarray(self.batch(xs), dtype=float)
        return np.array([float(self.func(x)) for x in xs])

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.minimum(np.maximum(x, self.lower), self.upper)


class VibrationRole(enum.Enum):
    ALPHA = "alpha"  # moved toward a better agent
    BETA = "beta"  # sensed a worse agent, did not move
    ALPHA_BETA_MUTATION = "alpha_beta_mutation"  # moved toward a random agent


@dataclass
class AgentState:
    position: np.ndarray
    cost: float
    vibration_role: VibrationRole = VibrationRole.BETA


@dataclass(frozen=True)
class ShsParams:
    """SHS hyperparameters.

    ``sweep`` selects how one iteration's interactions are applied:

    ``"elitist"`` (default)
        Every interaction of agent ``i`` starts from its position at the
        start of the iteration and is judged against start-of-iteration
        costs. The best candidate of each agent joins the population, and
        the merged set is truncated back to ``pop_size`` by cost.
    ``"literal"``
        Ordered pairs are processed one at a time; agent ``i`` moves in
        place after every interaction and the move is always accepted.

    ``normalize_distance`` divides the inter-agent distance by the diagonal
    of the search box before the exponential decay. ``step_jitter`` scales
    the attraction step by an independent U[0, 1] factor per coordinate.
    ``ShsParams.literal()`` switches all three off.
    """

    pop_size: int = 25
    max_iterations: int = 300
    claw_range: tuple[float, float] = (1.0, 3.0)
    sting_range: tuple[float, float] = (1.0, 3.0)
    mutation_rate: float = 0.2
    mutation_damp: float = 0.98
    delta_fraction: float = 0.05
    sweep: str = "elitist"
    normalize_distance: bool = True
    step_jitter: bool = True

    def __post_init__(self):
        if self.pop_size < 1:
            raise ConfigurationError("pop_size must be >= 1")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1")
        for label, (lo, hi) in (("claw_range", self.claw_range), ("sting_range", self.sting_range)):
            if not 0 < lo <= hi:
                raise ConfigurationError(f"{label} must satisfy 0 < min <= max, got {(lo, hi)}")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigurationError("mutation_rate must lie in [0, 1]")
        if not 0.0 < self.mutation_damp <= 1.0:
            raise ConfigurationError("mutation_damp must lie in (0, 1]")
        if self.delta_fraction < 0:
            raise ConfigurationError("delta_fraction must be non-negative")
        if self.sweep not in ("elitist", "literal"):
            raise ConfigurationError(f"unknown sweep {self.sweep!r}")

    @classmethod
    def literal(cls, **overrides) -> "ShsParams":
        base = dict(sweep="literal", normalize_distance=False, step_jitter=False)
        base.update(overrides)
        return cls(**base)


@dataclass
class RunResult:
    best_trace: np.ndarray
    final_position: np.ndarray
    final_cost: float
    seed: Optional[int]
    elapsed: float = field(default=0.0, compare=False)

    def __eq__(self, other):
        if not isinstance(other, RunResult):
            return NotImplemented
        return (
            np.array_equal(self.best_trace, other.best_trace)
            and np.array_equal(self.final_position, other.final_position)
            and self.final_cost == other.final_cost
            and self.seed == other.seed
        )


@dataclass(frozen=True)
class IterationState:
    """Snapshot handed to ``on_iteration`` observers after each iteration."""

    iteration: int
    positions: np.ndarray
    costs: np.ndarray
    best_cost: float
    mutation_rate: float


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def initialize_population(spec: ObjectiveSpec, n: int, rng) -> list[AgentState]:
    if n < 1:
        raise ConfigurationError("population size must be >= 1")
    u = rng.random((n, spec.dim))
    positions = u * (spec.upper - spec.lower) + spec.lower
    costs = spec.evaluate_many(positions)
    _check_finite(costs, positions)
    return [AgentState(positions[i], float(costs[i])) for i in range(n)]


def vibration_coefficient(psi: float, omega: float, distance: float) -> float:
    """Absorption coefficient ``psi * exp(-omega * distance)``."""
    if distance < 0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    return psi * math.exp(-omega * distance)


def diversity_vector(spec: ObjectiveSpec, rng, delta_fraction: float = 0.05) -> np.ndarray:
    delta = delta_fraction * (spec.upper - spec.lower)
    u = 2.0 * rng.random(spec.dim) - 1.0
    return delta * u


def move_agent(x_i, x_j, M, mu: float, e_div) -> np.ndarray:
    """Unclamped move of ``x_i`` toward ``x_j``.

    ``M`` may be a scalar or a per-coordinate vector.
    """
    x_i = np.asarray(x_i, dtype=float)
    x_j = np.asarray(x_j, dtype=float)
    e_div = np.asarray(e_div, dtype=float)
    if x_i.shape != x_j.shape or x_i.shape != e_div.shape:
        raise ValueError(
            f"dimension mismatch: x_i {x_i.shape}, x_j {x_j.shape}, e_div {e_div.shape}"
        )
    return x_i + M * (x_j - x_i) + mu * e_div


def damp_mutation(mu: float, mu_damp: float) -> float:
    return mu * mu_damp


def select_best(agents: Sequence[AgentState]) -> AgentState:
    if not agents:
        raise ValueError("cannot select from an empty population")
    best = agents[0]
    for agent in agents[1:]:
        if agent.cost < best.cost:
            best = agent
    return best


def _check_finite(costs: np.ndarray, positions: np.ndarray) -> None:
    bad = ~np.isfinite(costs)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise ObjectiveError(
            f"objective returned {costs[k]!r} at position {np.array2string(positions[k], precision=6)}"
        )


# ---------------------------------------------------------------------------
# Optimizer
# ---------------------------------------------------------------------------


def shs_optimize(
    spec: ObjectiveSpec,
    params: ShsParams = ShsParams(),
    rng=None,
    seed: Optional[int] = None,
    on_iteration: Optional[Callable[[IterationState], None]] = None,
) -> RunResult:
    """Minimize ``spec`` with SHS.

    Pass either an explicit ``rng`` or a ``seed``; the seed is recorded in the
    result. ``on_iteration`` receives an :class:`IterationState` after every
    iteration, with ``mutation_rate`` already damped for the next one.
    """
    if rng is None:
        rng = make_rng(0 if seed is None else seed)
    start = time.perf_counter()

    n = params.pop_size
    agents = initialize_population(spec, n, rng)
    X = np.array([a.position for a in agents])
    C = np.array([a.cost for a in agents])
    # per-agent coefficients, fixed for the run and carried with the agent
    psi = rng.uniform(*params.sting_range, size=n)
    omega = rng.uniform(*params.claw_range, size=n)

    delta = params.delta_fraction * (spec.upper - spec.lower)
    diag = float(np.linalg.norm(spec.upper - spec.lower))
    scale = diag if (params.normalize_distance and diag > 0) else 1.0

    k = int(np.argmin(C))
    best_x, best_c = X[k].copy(), float(C[k])
    trace = np.empty(params.max_iterations)
    mu = params.mutation_rate
    roles = np.full(n, VibrationRole.BETA, dtype=object)

    for t in range(params.max_iterations):
        if params.sweep == "elitist":
            X, C, psi, omega, roles = _elitist_sweep(spec, X, C, psi, omega, mu, delta, scale, params, rng)
            if C[0] < best_c:
                best_x, best_c = X[0].copy(), float(C[0])
        else:
            seen_x, seen_c = _literal_sweep(spec, X, C, psi, omega, mu, delta, scale, params, rng, roles)
            if seen_c < best_c:
                best_x, best_c = seen_x, seen_c
            order = np.argsort(C, kind="stable")
            X, C, psi, omega, roles = X[order], C[order], psi[order], omega[order], roles[order]
        trace[t] = best_c
        mu = damp_mutation(mu, params.mutation_damp)
        if on_iteration is not None:
            on_iteration(IterationState(t, X.copy(), C.copy(), best_c, mu))

    return RunResult(
        best_trace=trace,
        final_position=best_x,
        final_cost=best_c,
        seed=seed,
        elapsed=time.perf_counter() - start,
    )


def _pair_targets(C, mu, rng):
    """Classify every ordered pair (i, j), i != j, for one sweep.

    j better than i is an alpha interaction. Otherwise, with probability mu,
    i has met another scorpion and moves toward a uniformly drawn member
    (alpha-beta mutation); the remaining pairs are beta and motionless.
    Returns (mover, target, is_mutation) in row-major pair order.
    """
    n = C.size
    draw = rng.random((n, n)) < mu
    partner = rng.integers(0, n, size=(n, n))
    better = C[None, :] < C[:, None]  # [i, j]: agent j beats agent i
    off_diag = ~np.eye(n, dtype=bool)
    mutate = draw & ~better
    moves = off_diag & (better | mutate)
    target = np.where(mutate, partner, np.arange(n)[None, :])
    ii, jj = np.nonzero(moves)
    return ii, target[ii, jj], mutate[ii, jj]


def _elitist_sweep(spec, X, C, psi, omega, mu, delta, scale, params, rng):
    n, dim = X.shape
    ii, tt, mut = _pair_targets(C, mu, rng)
    roles = np.full(n, VibrationRole.BETA, dtype=object)
    if ii.size == 0:
        return X, C, psi, omega, roles

    diff = X[tt] - X[ii]
    r = np.sqrt(np.einsum("ij,ij->i", diff, diff)) / scale
    M = (psi[ii] * np.exp(-omega[ii] * r))[:, None]
    if params.step_jitter:
        M = M * rng.random((ii.size, dim))
    e_div = delta * (2.0 * rng.random((ii.size, dim)) - 1.0)
    cand = spec.clip(move_agent(X[ii], X[tt], M, mu, e_div))
    cost = spec.evaluate_many(cand)
    _check_finite(cost, cand)

    # best candidate per mover; ties keep the earliest pair
    order = np.lexsort((np.arange(ii.size), cost, ii))
    first = np.ones(order.size, dtype=bool)
    first[1:] = ii[order[1:]] != ii[order[:-1]]
    pick = order[first]
    movers = ii[pick]
    for p, i in zip(pick, movers):
        roles[i] = VibrationRole.ALPHA_BETA_MUTATION if mut[p] else VibrationRole.ALPHA

    allX = np.vstack([X, cand[pick]])
    allC = np.concatenate([C, cost[pick]])
    allpsi = np.concatenate([psi, psi[movers]])
    allomega = np.concatenate([omega, omega[movers]])
    allroles = np.concatenate([roles, roles[movers]])
    keep = np.argsort(allC, kind="stable")[:n]
    return allX[keep], allC[keep], allpsi[keep], allomega[keep], allroles[keep]


def _literal_sweep(spec, X, C, psi, omega, mu, delta, scale, params, rng, roles):
    """In-place sweep; returns the best position evaluated during it."""
    n, dim = X.shape
    best_x, best_c = None, math.inf
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            draw = rng.random() < mu
            if C[j] < C[i]:
                target = j
                role = VibrationRole.ALPHA
            elif draw:
                target = int(rng.integers(0, n))
                role = VibrationRole.ALPHA_BETA_MUTATION
            else:
                roles[i] = VibrationRole.BETA
                continue
            diff = X[target] - X[i]
            r = math.sqrt(float(diff @ diff)) / scale
            M = vibration_coefficient(psi[i], omega[i], r)
            if params.step_jitter:
                M = M * rng.random(dim)
            e_div = delta * (2.0 * rng.random(dim) - 1.0)
            new = spec.clip(move_agent(X[i], X[target], M, mu, e_div))
            cost = spec.evaluate(new)
            if not math.isfinite(cost):
                _check_finite(np.array([cost]), new[None, :])
            X[i], C[i] = new, cost
            roles[i] = role
            if cost < best_c:
                best_x, best_c = new.copy(), cost
    return best_x, best_c
