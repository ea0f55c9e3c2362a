"""Centroid-based clustering as a continuous search over centroid coordinates."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from ..engine import ConfigurationError, ObjectiveSpec

EMPTY_CLUSTER_PENALTY = 1e6
MODES = ("within", "paper_between_group")
IRIS_FEATURES = ("sepal_length", "petal_width")


@dataclass(frozen=True)
class ClusteringInstance:
    points: np.ndarray  # (N, d)
    k: int
    mode: str = "within"
    name: str = "clustering"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ConfigurationError("points must be a non-empty (N, d) array")
        if not 1 <= self.k <= pts.shape[0]:
            raise ConfigurationError(f"k must lie in [1, {pts.shape[0]}], got {self.k}")
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown clustering mode {self.mode!r}; choose from {MODES}")
        object.__setattr__(self, "points", pts)

    @property
    def n_features(self) -> int:
        return self.points.shape[1]


def load_iris(features: Sequence[str] = IRIS_FEATURES) -> tuple[np.ndarray, list[str]]:
    """Selected feature columns of the bundled iris table, plus species labels."""
    text = resources.files("shsopt.data").joinpath("iris.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(text)))
    missing = [f for f in features if f not in rows[0]]
    if missing:
        raise ConfigurationError(f"unknown iris feature(s): {', '.join(missing)}")
    X = np.array([[float(r[f]) for f in features] for r in rows])
    return X, [r["species"] for r in rows]


def iris_instance(k: int = 3, mode: str = "within") -> ClusteringInstance:
    X, _ = load_iris()
    return ClusteringInstance(X, k, mode, name="iris")


def _distances(inst: ClusteringInstance, centroids: np.ndarray) -> np.ndarray:
    # centroids (m, k, d) -> distances (m, N, k)
    diff = inst.points[None, :, None, :] - centroids[:, None, :, :]
    return np.sqrt(np.sum(diff**2, axis=-1))


def objective_many(inst: ClusteringInstance, V: np.ndarray) -> np.ndarray:
    m = V.shape[0]
    centroids = V.reshape(m, inst.k, inst.n_features)
    dist = _distances(inst, centroids)
    assign = np.argmin(dist, axis=2)  # first minimum wins ties
    sizes = np.stack([(assign == c).sum(axis=1) for c in range(inst.k)], axis=1)
    empty = (sizes == 0).sum(axis=1)
    if inst.mode == "within":
        value = np.take_along_axis(dist, assign[..., None], axis=2)[..., 0].sum(axis=1)
    else:
        iu, ju = np.triu_indices(inst.k, 1)
        value = np.linalg.norm(centroids[:, iu] - centroids[:, ju], axis=-1).sum(axis=1)
    return value + EMPTY_CLUSTER_PENALTY * empty


def clustering_objective(inst: ClusteringInstance) -> ObjectiveSpec:
    lo = np.tile(inst.points.min(axis=0), inst.k)
    hi = np.tile(inst.points.max(axis=0), inst.k)
    return ObjectiveSpec(
        name=f"clustering:{inst.name}:k{inst.k}",
        lower=lo,
        upper=hi,
        func=lambda v: float(objective_many(inst, np.asarray(v, dtype=float)[None])[0]),
        batch=lambda V: objective_many(inst, V),
    )


@dataclass(frozen=True)
class ClusteringSolution:
    centroids: np.ndarray
    assignments: np.ndarray
    sizes: np.ndarray
    objective: float


def decode(inst: ClusteringInstance, v) -> ClusteringSolution:
    v = np.asarray(v, dtype=float)
    centroids = v.reshape(inst.k, inst.n_features)
    dist = _distances(inst, centroids[None])[0]
    assign = np.argmin(dist, axis=1)
    sizes = np.bincount(assign, minlength=inst.k)
    return ClusteringSolution(centroids.copy(), assign, sizes, float(objective_many(inst, v[None])[0]))
