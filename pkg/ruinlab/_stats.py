"""Small statistical helpers shared by the estimators."""

import math

import numpy as np
from scipy import stats


def wilson_interval(n_success: int, n_total: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Stays inside ``[0, 1]`` and keeps positive width at ``n_success = 0``.
    """
    if n_total <= 0:
        raise ValueError(f"n_total must be positive, got {n_total}")
    if not 0 <= n_success <= n_total:
        raise ValueError(f"n_success must lie in [0, {n_total}], got {n_success}")
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    p = n_success / n_total
    denom = 1.0 + z * z / n_total
    center = (p + z * z / (2.0 * n_total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n_total + z * z / (4.0 * n_total**2)) / denom
    # clamp rounding so that low <= p_hat <= high holds exactly
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def mean_and_se(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and its standard error, with compensated summation."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 0:
        raise ValueError("no samples")
    mean = math.fsum(values) / n
    if n == 1:
        return mean, math.nan
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def ks_critical(n: int, level: float = 0.01) -> float:
    """Asymptotic two-sample Kolmogorov-Smirnov critical value for equal sizes ``n``."""
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    return math.sqrt(-math.log(level / 2.0) / 2.0) * math.sqrt(2.0 / n)
