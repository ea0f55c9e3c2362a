"""Classical benchmark functions.

Every function takes an ``(m, dim)`` array and returns ``m`` costs, so the
same code serves single-point and batched evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .engine import ConfigurationError, ObjectiveSpec

TABLE3_BOUNDS = (-10.0, 10.0)


def ackley(X, canonical=False):
    # printed variant: 0.02 inside the exponent and no +e term, so its
    # minimum at the origin is -e rather than 0
    d = X.shape[-1]
    a = 0.2 if canonical else 0.02
    rms = np.sqrt(np.sum(X**2, axis=-1) / d)
    mean_cos = np.sum(np.cos(2 * np.pi * X), axis=-1) / d
    out = -20.0 * np.exp(-a * rms) - np.exp(mean_cos) + 20.0
    return out + math.e if canonical else out


def rastrigin(X):
    d = X.shape[-1]
    return 10.0 * d + np.sum(X**2 - 10.0 * np.cos(2 * np.pi * X), axis=-1)


def zakharov(X):
    i = np.arange(1, X.shape[-1] + 1)
    s = 0.5 * np.sum(i * X, axis=-1)
    return np.sum(X**2, axis=-1) + s**2 + s**4


def booth(X):
    x1, x2 = X[..., 0], X[..., 1]
    return (x1 + 2 * x2 - 7) ** 2 + (2 * x1 + x2 - 5) ** 2


def dejong(X):
    return np.sum(X**2, axis=-1)


def beale(X):
    x1, x2 = X[..., 0], X[..., 1]
    return (
        (1.5 - x1 + x1 * x2) ** 2
        + (2.25 - x1 + x1 * x2**2) ** 2
        + (2.625 - x1 + x1 * x2**3) ** 2
    )


def powell(X):
    a, b, c, d = X[..., 0::4], X[..., 1::4], X[..., 2::4], X[..., 3::4]
    return np.sum(
        (a + 10 * b) ** 2 + 5 * (c - d) ** 2 + (b - 2 * c) ** 4 + 10 * (a - d) ** 4,
        axis=-1,
    )


def michalewicz(X, m=10):
    i = np.arange(1, X.shape[-1] + 1)
    return -np.sum(np.sin(X) * np.sin(i * X**2 / np.pi) ** (2 * m), axis=-1)


def trid(X):
    return np.sum((X - 1) ** 2, axis=-1) - np.sum(X[..., 1:] * X[..., :-1], axis=-1)


def levy(X):
    w = 1 + (X - 1) / 4
    head = np.sin(np.pi * w[..., 0]) ** 2
    body = np.sum((w[..., :-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * w[..., :-1] + 1) ** 2), axis=-1)
    tail = (w[..., -1] - 1) ** 2 * (1 + np.sin(2 * np.pi * w[..., -1]) ** 2)
    return head + body + tail


def _zeros(dim, value=0.0):
    return np.zeros(dim), value


def _trid_minimum(dim):
    i = np.arange(1, dim + 1)
    return (i * (dim + 1 - i)).astype(float), -dim * (dim + 4) * (dim - 1) / 6


def _michalewicz_minimum(dim):
    if dim == 2:
        return np.array([2.20290552, 1.57079633]), -1.8013034
    return None


@dataclass(frozen=True)
class BenchmarkEntry:
    name: str
    func: Callable[[np.ndarray], np.ndarray]
    default_domain: tuple[float, float]
    dimension_rule: str  # "scalable", "fixed-2D" or "multiple-of-4"
    default_dim: int
    minimum: Optional[Callable[[int], Optional[tuple[np.ndarray, float]]]] = None
    features: str = ""

    def check_dim(self, dim: int) -> None:
        if dim < 1:
            raise ConfigurationError(f"{self.name}: dimension must be positive, got {dim}")
        if self.dimension_rule == "fixed-2D" and dim != 2:
            raise ConfigurationError(f"{self.name} is fixed-2D; got dim={dim}")
        if self.dimension_rule == "multiple-of-4" and dim % 4:
            raise ConfigurationError(f"{self.name} needs dim divisible by 4; got dim={dim}")

    def known_minimum(self, dim: int) -> Optional[tuple[np.ndarray, float]]:
        return None if self.minimum is None else self.minimum(dim)


_ENTRIES = [
    BenchmarkEntry("ackley", ackley, (-35.0, 35.0), "scalable", 20,
                   lambda d: _zeros(d, -math.e), "multi-modal, many local minima"),
    BenchmarkEntry("rastrigin", rastrigin, (-5.12, 5.12), "scalable", 20,
                   _zeros, "multi-modal, many local minima"),
    BenchmarkEntry("zakharov", zakharov, (-5.0, 10.0), "scalable", 20,
                   _zeros, "unimodal, plate-shaped"),
    BenchmarkEntry("booth", booth, (-10.0, 10.0), "fixed-2D", 2,
                   lambda d: (np.array([1.0, 3.0]), 0.0), "unimodal, plate-shaped"),
    BenchmarkEntry("dejong", dejong, (-10.0, 10.0), "scalable", 20,
                   _zeros, "unimodal, bowl-shaped"),
    BenchmarkEntry("beale", beale, (-4.5, 4.5), "fixed-2D", 2,
                   lambda d: (np.array([3.0, 0.5]), 0.0), "unimodal, plate-shaped"),
    BenchmarkEntry("powell", powell, (-4.0, 5.0), "multiple-of-4", 20,
                   _zeros, "unimodal, valley-shaped"),
    BenchmarkEntry("michalewicz", michalewicz, (0.0, math.pi), "scalable", 20,
                   _michalewicz_minimum, "multi-modal, steep ridges"),
    BenchmarkEntry("trid", trid, (-36.0, 36.0), "scalable", 20,
                   _trid_minimum, "unimodal, bowl-shaped"),
    BenchmarkEntry("levy", levy, (-10.0, 10.0), "scalable", 20,
                   lambda d: (np.ones(d), 0.0), "multi-modal, many local minima"),
]

BENCHMARKS = {e.name: e for e in _ENTRIES}


def list_benchmarks() -> list[BenchmarkEntry]:
    return list(_ENTRIES)


def get_benchmark(name: str) -> BenchmarkEntry:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}"
        ) from None


def make_benchmark(
    name: str,
    dim: Optional[int] = None,
    domain_override: Optional[tuple[float, float]] = None,
    canonical_ackley: bool = False,
) -> ObjectiveSpec:
    """Build the ObjectiveSpec for a registered benchmark.

    ``domain_override`` replaces the native search domain with uniform
    bounds, e.g. ``TABLE3_BOUNDS`` for the comparison runs.
    ``canonical_ackley`` selects the textbook Ackley (0.2 coefficient, +e)
    whose minimum is 0; it is ignored for every other function.
    """
    entry = get_benchmark(name)
    dim = entry.default_dim if dim is None else int(dim)
    entry.check_dim(dim)

    if name == "ackley":
        batch = lambda X: ackley(X, canonical=canonical_ackley)  # noqa: E731
        optimum = (np.zeros(dim), 0.0 if canonical_ackley else -math.e)
    else:
        batch = entry.func
        optimum = entry.known_minimum(dim)

    lo, hi = domain_override if domain_override is not None else entry.default_domain
    label = "ackley-canonical" if (name == "ackley" and canonical_ackley) else name
    return ObjectiveSpec(
        name=label,
        lower=np.full(dim, float(lo)),
        upper=np.full(dim, float(hi)),
        func=lambda x: float(batch(np.asarray(x, dtype=float)[None, :])[0]),
        batch=batch,
        known_optimum=optimum,
    )
