"""Nonparametric comparison statistics for optimizer runs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as _sps

SIGNIFICANCE_LEVEL = 0.05
EXACT_LIMIT = 16  # exact Wilcoxon distribution when n + m <= EXACT_LIMIT and no ties


@dataclass(frozen=True)
class SummaryRow:
    algorithm: str
    function: str
    best: float
    median: float
    worst: float
    avg: float


def summarize(costs: Sequence[float]) -> dict:
    """best/median/worst/avg of a set of final costs."""
    a = np.asarray(costs, dtype=float)
    if a.size == 0:
        raise ValueError("cannot summarize an empty sample")
    s = np.sort(a)
    mid = s.size // 2
    median = s[mid] if s.size % 2 else (s[mid - 1] + s[mid]) / 2
    return {
        "best": float(s[0]),
        "median": float(median),
        "worst": float(s[-1]),
        "avg": float(np.mean(a)),
    }


def rankdata(values: Sequence[float]) -> np.ndarray:
    """Ascending 1-based ranks, ties sharing the mean of their positions."""
    a = np.asarray(values, dtype=float)
    order = np.argsort(a, kind="stable")
    ranks = np.empty(a.size)
    s = a[order]
    i = 0
    while i < a.size:
        j = i
        while j + 1 < a.size and s[j + 1] == s[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _rank_sum_counts(n: int, m: int) -> np.ndarray:
    """counts[u] = number of n-subsets of ranks 1..n+m whose U statistic is u."""
    # dp[k][u]: ways to choose k items so far with U contribution u
    N = n + m
    dp = np.zeros((n + 1, n * m + 1), dtype=object)
    dp[0, 0] = 1
    for item in range(N):
        # item has `item` smaller elements; choosing it as the k-th pick adds
        # (item - (k - 1)) to U = sum over chosen of (#unchosen below it)
        for k in range(min(n, item + 1), 0, -1):
            shift = item - (k - 1)
            if shift > m:
                continue
            src = dp[k - 1, : n * m + 1 - shift]
            dp[k, shift:] = dp[k, shift:] + src
    return dp[n]


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Two-sided Wilcoxon rank-sum (Mann-Whitney) test.

    Returns ``(U, p)`` where U counts pairs with ``a`` above ``b`` (ties count
    one half). The exact null distribution is used for tie-free samples with
    ``n + m <= 16``; otherwise the normal approximation with tie-corrected
    variance and continuity correction.
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    n, m = x.size, y.size
    if n == 0 or m == 0:
        raise ValueError("both samples need at least one value")
    ranks = rankdata(np.concatenate([x, y]))
    u = float(ranks[:n].sum() - n * (n + 1) / 2)

    has_ties = np.unique(ranks).size < n + m
    if not has_ties and n + m <= EXACT_LIMIT:
        counts = _rank_sum_counts(n, m)
        total = sum(counts)
        k = int(round(u))
        lower = sum(counts[: k + 1])
        upper = sum(counts[k:])
        p = 2 * min(lower, upper) / total
        return u, min(1.0, float(p))

    mean = n * m / 2
    _, tie_counts = np.unique(ranks, return_counts=True)
    N = n + m
    tie_term = float(np.sum(tie_counts**3 - tie_counts))
    var = n * m / 12 * ((N + 1) - tie_term / (N * (N - 1))) if N > 1 else 0.0
    if var <= 0:
        return u, 1.0
    z = max(abs(u - mean) - 0.5, 0.0) / math.sqrt(var)
    return u, min(1.0, float(2 * _sps.norm.sf(z)))


@dataclass(frozen=True)
class RankTable:
    algorithms: tuple[str, ...]
    block_ranks: np.ndarray  # blocks x algorithms
    average_rank: np.ndarray
    chi_square: float
    p_value: float


def friedman_ranks(costs, algorithms: Sequence[str] | None = None) -> RankTable:
    """Friedman test over a blocks x algorithms cost matrix (lower is better).

    The chi-square statistic includes the standard correction for ties.
    """
    rows = [list(r) for r in costs]
    if not rows:
        raise ValueError("need at least one block")
    k = len(rows[0])
    if any(len(r) != k for r in rows):
        raise ValueError("ragged cost matrix: every block needs one value per algorithm")
    if k < 2:
        raise ValueError("need at least two algorithms")
    matrix = np.asarray(rows, dtype=float)
    b = matrix.shape[0]
    ranks = np.vstack([rankdata(row) for row in matrix])
    avg = ranks.mean(axis=0)

    rank_sums = ranks.sum(axis=0)
    ssb = float(np.sum(rank_sums**2))
    chi2 = 12.0 / (b * k * (k + 1)) * ssb - 3.0 * b * (k + 1)
    ties = 0.0
    for row in ranks:
        _, t = np.unique(row, return_counts=True)
        ties += float(np.sum(t**3 - t))
    denom = 1.0 - ties / (b * k * (k * k - 1))
    if denom <= 0:
        chi2, p = 0.0, 1.0
    else:
        chi2 = chi2 / denom
        p = float(_sps.chi2.sf(chi2, k - 1))
    names = tuple(algorithms) if algorithms is not None else tuple(f"alg{i}" for i in range(k))
    if len(names) != k:
        raise ValueError("one algorithm name per column required")
    return RankTable(names, ranks, avg, float(chi2), p)


def minmax_normalize(costs: Sequence[float]) -> np.ndarray:
    a = np.asarray(costs, dtype=float)
    if a.size == 0:
        raise ValueError("cannot normalize an empty sample")
    lo, hi = a.min(), a.max()
    if hi == lo:
        return np.zeros_like(a)
    return (a - lo) / (hi - lo)


def pearson_correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Sample Pearson R; NaN when either series is constant."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.size != y.size:
        raise ValueError("series must have equal length")
    if x.size < 2:
        raise ValueError("need at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        return math.nan
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
