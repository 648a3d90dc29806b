"""Interval estimators shared by the simulation and condition reports."""

import math
from statistics import NormalDist

import numpy as np
from scipy import stats as _scipy_stats

#: two-sided 95% normal quantile used by the Wilson score interval
Z95 = NormalDist().inv_cdf(0.975)


def wilson_interval(hits: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion.

    Chosen over the Wald interval because the experiments here live at
    proportions very close to 0 or 1, where Wald collapses.
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    if not 0 <= hits <= trials:
        raise ValueError(f"hits must lie in [0, trials], got {hits}/{trials}")
    p = hits / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    # the interval always contains the point estimate; pin the exact endpoints
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == trials else min(1.0, center + half)
    return lo, hi


def wilson_half_width(hits: int, trials: int) -> float:
    lo, hi = wilson_interval(hits, trials)
    return (hi - lo) / 2.0


def mean_t_interval(samples) -> tuple[float, float, float]:
    """Sample mean with a two-sided 95% t-interval: (mean, low, high)."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples for a t-interval")
    mean = float(x.mean())
    se = float(x.std(ddof=1)) / math.sqrt(n)
    half = float(_scipy_stats.t.ppf(0.975, n - 1)) * se
    return mean, mean - half, mean + half
