"""Movement-time models and significance analyses.

Movement time T is modeled against distance D (target row index, in lines)
two ways: T = a + b*D and T = a + b*log2(D). Both are ordinary least squares;
the log model simply transforms the predictor. Group comparisons use one-way
ANOVA with Tukey's HSD post hoc via the embedded studentized-range table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import f as f_distribution

from .qtable import q_critical


@dataclass(frozen=True)
class RegressionFit:
    model: str  # "linear" | "log2"
    a: float
    b: float
    r2: float
    n: int

    def predict(self, d: float) -> float:
        x = math.log2(d) if self.model == "log2" else d
        return self.a + self.b * x


def _ols(x: np.ndarray, y: np.ndarray, model: str) -> RegressionFit:
    if len(x) < 3:
        raise ValueError(f"need at least 3 points for a reported fit, got {len(x)}")
    x_mean = x.mean()
    y_mean = y.mean()
    sxx = float(((x - x_mean) ** 2).sum())
    if sxx == 0.0:
        raise ValueError("no variance in predictor")
    b = float(((x - x_mean) * (y - y_mean)).sum()) / sxx
    a = float(y_mean - b * x_mean)
    residuals = y - (a + b * x)
    ss_res = float((residuals**2).sum())
    ss_tot = float(((y - y_mean) ** 2).sum())
    # Constant data: zero total and zero residual variation count as a perfect fit.
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RegressionFit(model=model, a=a, b=b, r2=r2, n=len(x))


def fit_linear(points: Sequence[tuple[float, float]]) -> RegressionFit:
    """OLS fit of T = a + b*D."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be (distance, time) pairs")
    return _ols(arr[:, 0], arr[:, 1], "linear")


def fit_log2(points: Sequence[tuple[float, float]]) -> RegressionFit:
    """OLS fit of T = a + b*log2(D); all distances must be >= 1."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be (distance, time) pairs")
    if (arr[:, 0] <= 0).any():
        raise ValueError("log model needs strictly positive distances")
    return _ols(np.log2(arr[:, 0]), arr[:, 1], "log2")


@dataclass(frozen=True)
class ModelComparison:
    linear: RegressionFit
    log2: RegressionFit

    @property
    def winner(self) -> str:
        # Ties break toward the linear model.
        return "log2" if self.log2.r2 > self.linear.r2 else "linear"


def compare_fits(points: Sequence[tuple[float, float]]) -> ModelComparison:
    """Fit both models and report the higher-r2 winner."""
    return ModelComparison(linear=fit_linear(points), log2=fit_log2(points))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation; rejects mismatched or variance-free input."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError("inputs must be equal-length vectors")
    if len(xa) < 2:
        raise ValueError("need at least 2 observations")
    xd = xa - xa.mean()
    yd = ya - ya.mean()
    sx = float((xd**2).sum())
    sy = float((yd**2).sum())
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance")
    return float((xd * yd).sum() / math.sqrt(sx * sy))


@dataclass(frozen=True)
class AnovaResult:
    f_stat: float
    df_between: int
    df_within: int
    p_value: float
    ss_between: float
    ss_within: float
    ms_within: float


def anova_oneway(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way ANOVA. Zero within-variance with unequal means reports F = inf."""
    if len(groups) < 2:
        raise ValueError("need at least 2 groups")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if any(len(a) < 2 for a in arrays):
        raise ValueError("every group needs at least 2 observations")
    n_total = sum(len(a) for a in arrays)
    k = len(arrays)
    grand = sum(float(a.sum()) for a in arrays) / n_total
    ss_between = sum(len(a) * (float(a.mean()) - grand) ** 2 for a in arrays)
    ss_within = sum(float(((a - a.mean()) ** 2).sum()) for a in arrays)
    df_between = k - 1
    df_within = n_total - k
    ms_within = ss_within / df_within
    if ss_within == 0.0:
        f_stat = 0.0 if ss_between <= 1e-12 else math.inf
    else:
        f_stat = (ss_between / df_between) / ms_within
    if math.isinf(f_stat):
        p = 0.0
    elif f_stat == 0.0:
        p = 1.0
    else:
        p = float(f_distribution.sf(f_stat, df_between, df_within))
    return AnovaResult(
        f_stat=f_stat,
        df_between=df_between,
        df_within=df_within,
        p_value=p,
        ss_between=ss_between,
        ss_within=ss_within,
        ms_within=ms_within,
    )


@dataclass(frozen=True)
class TukeyGrouping:
    alpha: float
    q_crit: float
    labels: tuple[str, ...]
    means: tuple[float, ...]
    significant: dict[tuple[str, str], bool]
    groups: tuple[tuple[str, ...], ...]

    def is_significant(self, a: str, b: str) -> bool:
        key = (a, b) if (a, b) in self.significant else (b, a)
        return self.significant[key]


def tukey_hsd(
    groups: Sequence[Sequence[float]],
    alpha: float = 0.05,
    labels: Sequence[str] | None = None,
) -> TukeyGrouping:
    """Pairwise Tukey HSD plus homogeneous subsets.

    Pair (i, j) is significant when
    ``|mean_i - mean_j| > q_crit * sqrt(ms_within/2 * (1/n_i + 1/n_j))``
    (the Tukey-Kramer form, exact for equal group sizes). Subsets are built
    by sorting means and greedily extending each subset while the candidate
    stays non-significant against every member, which yields a partition.
    """
    anova = anova_oneway(groups)
    arrays = [np.asarray(g, dtype=float) for g in groups]
    k = len(arrays)
    if labels is None:
        labels = [f"group{i}" for i in range(k)]
    if len(labels) != k:
        raise ValueError("labels must match group count")
    q = q_critical(k, anova.df_within, alpha)
    means = [float(a.mean()) for a in arrays]
    sizes = [len(a) for a in arrays]

    significant: dict[tuple[str, str], bool] = {}
    for i in range(k):
        for j in range(i + 1, k):
            hsd = q * math.sqrt(anova.ms_within / 2.0 * (1.0 / sizes[i] + 1.0 / sizes[j]))
            significant[(labels[i], labels[j])] = abs(means[i] - means[j]) > hsd

    def sig(a: str, b: str) -> bool:
        return significant[(a, b)] if (a, b) in significant else significant[(b, a)]

    order = sorted(range(k), key=lambda i: (means[i], labels[i]))
    subsets: list[list[int]] = []
    for idx in order:
        if subsets and all(not sig(labels[m], labels[idx]) for m in subsets[-1]):
            subsets[-1].append(idx)
        else:
            subsets.append([idx])

    return TukeyGrouping(
        alpha=alpha,
        q_crit=q,
        labels=tuple(labels),
        means=tuple(means),
        significant=significant,
        groups=tuple(tuple(labels[i] for i in subset) for subset in subsets),
    )
