"""Correlations and the Mann-Whitney rank test used in audits.

Pearson and Spearman delegate to scipy; Mann-Whitney is computed from
average ranks with the tie-corrected normal approximation and a 0.5
continuity correction, so its p-value convention is pinned here rather
than inherited from a library default.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.stats


def _check_pair(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ValueError("x and y must have the same length")
    if len(x) < 3:
        raise ValueError("correlations need n >= 3")
    if np.std(x) == 0 or np.std(y) == 0:
        raise ValueError("zero variance input makes the correlation undefined")


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    _check_pair(x, y)
    return float(scipy.stats.pearsonr(x, y).statistic)


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Rank correlation with average ranks on ties."""
    _check_pair(x, y)
    return float(scipy.stats.spearmanr(x, y).statistic)


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float
    u_prime: float
    p: float


def mannwhitney(a: Sequence[float], b: Sequence[float]) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U via the normal approximation."""
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(a), len(b)
    ranks = scipy.stats.rankdata(np.concatenate([np.asarray(a, float), np.asarray(b, float)]))
    r1 = float(ranks[:n1].sum())
    u = r1 - n1 * (n1 + 1) / 2.0
    u_prime = n1 * n2 - u

    n = n1 + n2
    tie_term = sum(t**3 - t for t in Counter(ranks).values())
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma_sq <= 0:
        return MannWhitneyResult(u=u, u_prime=u_prime, p=1.0)
    mu = n1 * n2 / 2.0
    if u == mu:
        z = 0.0
    elif u < mu:
        z = (u - mu + 0.5) / math.sqrt(sigma_sq)
    else:
        z = (u - mu - 0.5) / math.sqrt(sigma_sq)
    p = min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
    return MannWhitneyResult(u=u, u_prime=u_prime, p=p)


def bonferroni(p: float, comparisons: int) -> float:
    """Bonferroni-adjusted p-value, capped at 1."""
    if comparisons < 1:
        raise ValueError("comparisons must be >= 1")
    return min(1.0, p * comparisons)
