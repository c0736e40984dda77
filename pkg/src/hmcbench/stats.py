"""Resampling statistics for paired benchmark comparisons.

Monte Carlo validation reuses overlapping training sets, so the naive
variance of per-fold accuracy differences is too small.  The corrected
variance inflates the unbiased sample variance by (1/K + n_test/n_train);
the corresponding corrected resampled t-test (t against Student-t with
K - 1 degrees of freedom) drives the significance arrows: one arrow at
p <= 0.05, two at 0.01, three at 0.001.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FoldRecord:
    """One method's result on one Monte Carlo fold."""

    fold: int
    method_tag: str
    accuracy: float
    mean_evaluations: float
    wall_time_s: float = 0.0
    max_depth: float = float("nan")
    mean_leaf_depth: float = float("nan")

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy {self.accuracy} outside [0, 1]")


@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    p_value: float
    df: int
    degenerate: bool = False


@dataclass(frozen=True)
class ComparisonReport:
    method_a: str
    method_b: str
    mean_diff: float
    corrected_se: float
    t_stat: float
    p_value: float
    arrows: int
    direction: str  # "a_better" | "b_better" | "none"


# ---------------------------------------------------------------------------
# Student-t distribution via the regularized incomplete beta function.

_CF_MAX_ITER = 500
_CF_EPS = 1e-16
_CF_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(x: float, df: float) -> float:
    """Student-t distribution function, accurate to about 1e-12."""
    if df < 1:
        raise ValueError("df must be at least 1")
    if x == 0.0:
        return 0.5
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + x * x))
    return 1.0 - tail if x > 0 else tail


# ---------------------------------------------------------------------------
# Corrected resampling statistics.


def corrected_variance(accs, n_train: int, n_test: int):
    """(mean, corrected standard error) of per-fold accuracies.

    corrected_se = sqrt((1/K + n_test/n_train) * s^2) with s^2 the unbiased
    sample variance; the n_test/n_train term accounts for the overlap
    between Monte Carlo training sets.
    """
    accs = np.asarray(accs, dtype=np.float64)
    if accs.size < 2:
        raise ValueError("need at least 2 folds")
    if n_train < 1 or n_test < 1:
        raise ValueError("n_train and n_test must be positive")
    mean = float(accs.mean())
    s2 = float(accs.var(ddof=1))
    se = math.sqrt((1.0 / accs.size + n_test / n_train) * s2)
    return mean, se


def corrected_resampled_t(diffs, n_train: int, n_test: int) -> TTestResult:
    """Two-sided corrected resampled t-test on paired accuracy differences."""
    diffs = np.asarray(diffs, dtype=np.float64)
    mean, se = corrected_variance(diffs, n_train, n_test)
    df = diffs.size - 1
    if se == 0.0:
        if mean == 0.0:
            return TTestResult(0.0, 1.0, df)
        return TTestResult(math.copysign(math.inf, mean), 0.0, df,
                           degenerate=True)
    t = mean / se
    p = 2.0 * (1.0 - t_cdf(abs(t), df))
    return TTestResult(t, min(max(p, 0.0), 1.0), df)


def arrows_from_p(p: float) -> int:
    if p <= 0.001:
        return 3
    if p <= 0.01:
        return 2
    if p <= 0.05:
        return 1
    return 0


def compare(records_a, records_b, n_train: int, n_test: int) -> ComparisonReport:
    """Paired fold-by-fold comparison of two methods' accuracy records."""
    a = sorted(records_a, key=lambda r: r.fold)
    b = sorted(records_b, key=lambda r: r.fold)
    if len(a) != len(b) or [r.fold for r in a] != [r.fold for r in b]:
        raise ValueError("records are not paired by fold")
    if not a:
        raise ValueError("no records to compare")
    diffs = np.array([ra.accuracy - rb.accuracy for ra, rb in zip(a, b)])
    result = corrected_resampled_t(diffs, n_train, n_test)
    mean_diff, se = corrected_variance(diffs, n_train, n_test)
    arrows = arrows_from_p(result.p_value)
    if arrows == 0 or mean_diff == 0.0:
        direction = "none"
    else:
        direction = "a_better" if mean_diff > 0 else "b_better"
    return ComparisonReport(a[0].method_tag, b[0].method_tag, mean_diff, se,
                            result.t_stat, result.p_value, arrows, direction)


def format_mean_se(mean: float, se: float) -> str:
    """Render as value±error with 4 significant digits, e.g. 0.9484±0.0032."""
    return f"{mean:.4g}±{se:.4g}"


def arrow_marks(arrows: int, direction: str) -> str:
    if arrows == 0 or direction == "none":
        return ""
    return ("↑" if direction == "a_better" else "↓") * arrows
