"""Hub location-allocation with a load-balance term.

The decision vector holds the hub coordinates. Each client is served by its
nearest hub; the cost is total client-to-hub distance plus ``balance_weight``
times the standard deviation of the per-hub client counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import ConfigurationError, ObjectiveSpec, make_rng

DEFAULT_CLIENTS = 40
DEFAULT_HUBS = 4
DEFAULT_BALANCE_WEIGHT = 1.0
DEFAULT_SEED = 2024
DEFAULT_AREA = 100.0


@dataclass(frozen=True)
class HlpInstance:
    clients: np.ndarray  # (N, 2)
    hub_count: int = DEFAULT_HUBS
    balance_weight: float = DEFAULT_BALANCE_WEIGHT
    name: str = "hlp"

    def __post_init__(self):
        xy = np.asarray(self.clients, dtype=float)
        if xy.ndim != 2 or xy.shape[1] != 2 or xy.shape[0] == 0:
            raise ConfigurationError("clients must be a non-empty (N, 2) array")
        if self.hub_count < 1:
            raise ConfigurationError("hub_count must be >= 1")
        if self.hub_count > xy.shape[0]:
            raise ConfigurationError(f"hub_count {self.hub_count} exceeds the {xy.shape[0]} clients")
        if self.balance_weight < 0:
            raise ConfigurationError("balance_weight must be non-negative")
        object.__setattr__(self, "clients", xy)


def default_hlp_instance(
    n_clients: int = DEFAULT_CLIENTS,
    hub_count: int = DEFAULT_HUBS,
    balance_weight: float = DEFAULT_BALANCE_WEIGHT,
    seed: int = DEFAULT_SEED,
) -> HlpInstance:
    clients = make_rng(seed).random((n_clients, 2)) * DEFAULT_AREA
    return HlpInstance(clients, hub_count, balance_weight, name=f"hlp-{n_clients}")


def _evaluate(inst: HlpInstance, H: np.ndarray):
    # H (m, hubs, 2) -> distances (m, N, hubs), assignment (m, N), loads (m, hubs)
    dist = np.linalg.norm(inst.clients[None, :, None, :] - H[:, None, :, :], axis=-1)
    assign = np.argmin(dist, axis=2)
    loads = np.stack([(assign == h).sum(axis=1) for h in range(inst.hub_count)], axis=1)
    travel = np.take_along_axis(dist, assign[..., None], axis=2)[..., 0].sum(axis=1)
    return travel + inst.balance_weight * loads.std(axis=1), assign, loads


def hlp_objective(inst: HlpInstance) -> ObjectiveSpec:
    lo = np.tile(inst.clients.min(axis=0), inst.hub_count)
    hi = np.tile(inst.clients.max(axis=0), inst.hub_count)

    def batch(V):
        return _evaluate(inst, V.reshape(len(V), inst.hub_count, 2))[0]

    return ObjectiveSpec(
        name=f"hlp:{inst.name}",
        lower=lo,
        upper=hi,
        func=lambda v: float(batch(np.asarray(v, dtype=float)[None])[0]),
        batch=batch,
    )


@dataclass(frozen=True)
class HlpSolution:
    hubs: np.ndarray
    assignments: np.ndarray
    loads: np.ndarray
    objective: float


def decode(inst: HlpInstance, v) -> HlpSolution:
    H = np.asarray(v, dtype=float).reshape(1, inst.hub_count, 2)
    value, assign, loads = _evaluate(inst, H)
    return HlpSolution(H[0].copy(), assign[0], loads[0], float(value[0]))
