"""Parallel machine scheduling with sequence-dependent setups, random-key encoded.

Each task gets one key in ``[0, m]``. The integer part picks the machine
(capped at ``m - 1``) and the fractional part orders tasks on that machine.
Setup times depend on the (machine, task) pair and are sampled once per
instance, so every evaluation sees the same values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..engine import ConfigurationError, ObjectiveSpec, make_rng

# processing times of 20 tasks on 2 machines
PROCESSING_2x20 = np.array(
    [
        [42, 13, 43, 31, 14, 42, 23, 13, 48, 14, 10, 18, 18, 29, 13, 10, 42, 34, 22, 27],
        [38, 13, 20, 20, 25, 38, 14, 29, 12, 38, 26, 21, 27, 48, 20, 14, 14, 15, 30, 17],
    ]
)

DEFAULT_SETUP_RANGE = (3, 9)
DEFAULT_SETUP_SEED = 42


@dataclass(frozen=True)
class PmsInstance:
    processing: np.ndarray  # machines x tasks
    setup: np.ndarray  # machines x tasks, frozen
    name: str = "pms"

    def __post_init__(self):
        p = np.asarray(self.processing, dtype=float)
        s = np.asarray(self.setup, dtype=float)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ConfigurationError("processing must be a non-empty machines x tasks matrix")
        if s.shape != p.shape:
            raise ConfigurationError(f"setup shape {s.shape} does not match processing shape {p.shape}")
        if np.any(p < 0) or np.any(s < 0):
            raise ConfigurationError("processing and setup times must be non-negative")
        object.__setattr__(self, "processing", p)
        object.__setattr__(self, "setup", s)

    @property
    def n_machines(self) -> int:
        return self.processing.shape[0]

    @property
    def n_tasks(self) -> int:
        return self.processing.shape[1]

    @property
    def total_time(self) -> np.ndarray:
        return self.processing + self.setup


def sample_setups(shape, setup_range=DEFAULT_SETUP_RANGE, seed: int = DEFAULT_SETUP_SEED) -> np.ndarray:
    lo, hi = setup_range
    if lo > hi or lo < 0:
        raise ConfigurationError(f"invalid setup range {setup_range}")
    return make_rng(seed).integers(lo, hi, size=shape, endpoint=True)


def make_pms_instance(
    processing,
    setup=None,
    setup_range=DEFAULT_SETUP_RANGE,
    setup_seed: int = DEFAULT_SETUP_SEED,
    name: str = "pms",
) -> PmsInstance:
    p = np.asarray(processing, dtype=float)
    if setup is None:
        setup = sample_setups(p.shape, setup_range, setup_seed)
    return PmsInstance(p, setup, name)


@dataclass(frozen=True)
class PmsSolution:
    sequences: list[list[int]]  # 0-based task ids per machine, in processing order
    completion: np.ndarray  # per-machine completion time
    cmax: float


def assign_machines(keys: np.ndarray, n_machines: int) -> np.ndarray:
    return np.minimum(np.floor(keys), n_machines - 1).astype(int).clip(0)


def decode(inst: PmsInstance, keys) -> PmsSolution:
    v = np.asarray(keys, dtype=float)
    if v.shape != (inst.n_tasks,):
        raise ValueError(f"expected {inst.n_tasks} keys, got shape {v.shape}")
    machine = assign_machines(v, inst.n_machines)
    frac = v - machine
    sequences = []
    for k in range(inst.n_machines):
        tasks = np.flatnonzero(machine == k)
        order = np.lexsort((tasks, frac[tasks]))
        sequences.append([int(t) for t in tasks[order]])
    completion = np.array(
        [inst.total_time[k, seq].sum() if seq else 0.0 for k, seq in enumerate(sequences)]
    )
    return PmsSolution(sequences, completion, float(completion.max()))


def cmax_many(inst: PmsInstance, V: np.ndarray) -> np.ndarray:
    machine = assign_machines(V, inst.n_machines)
    task_time = inst.total_time[machine, np.arange(inst.n_tasks)[None, :]]
    loads = np.stack([np.where(machine == k, task_time, 0.0).sum(axis=1) for k in range(inst.n_machines)])
    return loads.max(axis=0)


def pms_objective(inst: PmsInstance) -> ObjectiveSpec:
    m, t = inst.n_machines, inst.n_tasks
    return ObjectiveSpec(
        name=f"pms:{inst.name}",
        lower=np.zeros(t),
        upper=np.full(t, float(m)),
        func=lambda v: float(cmax_many(inst, np.asarray(v, dtype=float)[None])[0]),
        batch=lambda V: cmax_many(inst, V),
    )


def cmax_lower_bound(inst: PmsInstance, tasks: Optional[np.ndarray] = None) -> float:
    """max(longest single task at its best machine, average machine load)."""
    best = inst.total_time.min(axis=0)
    return float(max(best.max(), best.sum() / inst.n_machines))
