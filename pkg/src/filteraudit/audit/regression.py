"""OLS with dummy-coded designs for score-vs-dimension regressions.

``ols`` is the core solver: QR with column pivoting for rank
diagnostics, classical standard errors, and two-sided t-test p-values.
``ols_regression`` builds the shipped design (topic and region dummies
with one base level each, individual and core-anglophone flags, log2
character count) and z-scores the dependent variable, negating it first
for lower-is-better filters such as perplexity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.stats


def significance_stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


@dataclass(frozen=True)
class OLSResult:
    names: List[str]
    coef: np.ndarray
    stderr: np.ndarray
    tvalues: np.ndarray
    pvalues: np.ndarray
    stars: List[str]
    r2: float
    adj_r2: float
    n: int


def ols(
    X: np.ndarray,
    y: Sequence[float],
    names: Sequence[str],
    add_intercept: bool = True,
) -> OLSResult:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(names):
        raise ValueError("X must be 2-D with one name per column")
    if add_intercept:
        design = np.column_stack([np.ones(len(y)), X])
        names = ["intercept"] + list(names)
    else:
        design = X
        names = list(names)
    n, k = design.shape
    if n <= k:
        raise ValueError(f"need more rows than columns, got {n} rows for {k} columns")

    _, r, pivot = scipy.linalg.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = diag.max() * max(n, k) * np.finfo(float).eps
    rank = int(np.sum(diag > tol))
    if rank < k:
        collinear = ", ".join(names[i] for i in sorted(pivot[rank:]))
        raise ValueError(f"rank-deficient design: collinear columns {collinear}")

    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ coef
    rss = float(residuals @ residuals)
    tss = float(((y - y.mean()) ** 2).sum())
    if tss == 0:
        raise ValueError("dependent variable has zero variance")
    dof = n - k
    sigma_sq = rss / dof
    cov = sigma_sq * np.linalg.inv(design.T @ design)
    stderr = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        tvalues = np.where(stderr > 0, coef / stderr, np.inf * np.sign(coef))
    pvalues = 2.0 * scipy.stats.t.sf(np.abs(tvalues), dof)
    r2 = 1.0 - rss / tss
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / dof
    return OLSResult(
        names=names,
        coef=coef,
        stderr=stderr,
        tvalues=tvalues,
        pvalues=pvalues,
        stars=[significance_stars(p) for p in pvalues],
        r2=r2,
        adj_r2=adj_r2,
        n=n,
    )


@dataclass(frozen=True)
class RegressionSpec:
    dependent: str
    topic_base: str = "art, gallery"
    region_base: str = "Africa"
    negate_dependent: bool = False


def design_matrix(
    rows: Sequence[Mapping], spec: RegressionSpec
) -> Tuple[np.ndarray, List[str], np.ndarray]:
    """Dummy-coded design over profile rows, dropping one base level each."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to regress on")
    topics = sorted({row["topic"] for row in rows})
    regions = sorted({row["region"] for row in rows})
    if spec.topic_base not in topics:
        raise ValueError(f"topic base level {spec.topic_base!r} not present in rows")
    if spec.region_base not in regions:
        raise ValueError(f"region base level {spec.region_base!r} not present in rows")
    topic_levels = [t for t in topics if t != spec.topic_base]
    region_levels = [r for r in regions if r != spec.region_base]
    names = (
        [f"topic={t}" for t in topic_levels]
        + [f"region={r}" for r in region_levels]
        + ["individual", "core_anglophone", "log2_chars"]
    )
    X = np.zeros((len(rows), len(names)))
    y = np.zeros(len(rows))
    for i, row in enumerate(rows):
        col = 0
        for t in topic_levels:
            X[i, col] = 1.0 if row["topic"] == t else 0.0
            col += 1
        for r in region_levels:
            X[i, col] = 1.0 if row["region"] == r else 0.0
            col += 1
        X[i, col] = 1.0 if row["individual"] else 0.0
        X[i, col + 1] = 1.0 if row["core_anglophone"] else 0.0
        X[i, col + 2] = float(row["log2_chars"])
        y[i] = float(row["score"])
    if spec.negate_dependent:
        y = -y
    return X, names, y


def ols_regression(spec: RegressionSpec, rows: Sequence[Mapping]) -> OLSResult:
    """Fit the shipped design with a z-scored dependent variable."""
    X, names, y = design_matrix(rows, spec)
    std = y.std()
    if std == 0:
        raise ValueError("dependent variable has zero variance")
    z = (y - y.mean()) / std
    return ols(X, z, names)
