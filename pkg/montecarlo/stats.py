"""
Slope fits and goodness-of-fit distances
"""

from typing import Callable, Sequence

import numpy as np
from scipy import stats

from core.exceptions import ConfigurationError
from .schemas import SweepRow


def abscissa_values(ns: Sequence[float], abscissa: str) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    if abscissa == "log":
        return np.log(ns)
    if abscissa == "loglog":
        return np.log(np.log(ns))
    raise ConfigurationError(f"unknown abscissa {abscissa!r}; use 'log' or 'loglog'")


def fit_slope(rows: Sequence[SweepRow], abscissa: str = "log") -> float:
    """Least-squares slope of the mean throughput against log n or log log n"""
    if len(rows) < 3:
        raise ConfigurationError("slope fit needs at least 3 rows")
    x = abscissa_values([row.n for row in rows], abscissa)
    y = np.array([row.estimate.mean for row in rows])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def ks_distance(samples: Sequence[float], cdf: Callable) -> float:
    """Sup distance between the empirical cdf of samples and cdf"""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 100:
        raise ConfigurationError("KS distance needs at least 100 samples")
    return float(stats.kstest(samples, cdf).statistic)


def ks_critical_value(size: int, significance: float = 0.01) -> float:
    """Asymptotic one-sample KS critical value"""
    return float(stats.kstwobign.isf(significance) / np.sqrt(size))
