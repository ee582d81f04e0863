"""
Numerical constants appearing in the throughput bounds
"""

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import integrate, special, stats

from core.exceptions import ConfigurationError, DivergentConstant
from network.schemas import PrimaryMode, SystemConfig
from .schemas import TheoryConstants

EULER_GAMMA = 0.57721566490153286061

# Tail mass of the maximum ignored by the quadrature range
_TAIL_MASS = 1e-12


def r_I(m: int, mp: int, power: float) -> float:
    """Interference penalty m_min log(1 + power exp(mean harmonic sum - γ))"""
    if m < 1 or mp < 1 or power <= 0:
        raise ConfigurationError("r_I needs m, mp >= 1 and power > 0")
    m_min, m_max = min(m, mp), max(m, mp)
    harmonic = sum(1.0 / i for j in range(1, m_min + 1) for i in range(1, m_max - j + 1))
    return m_min * math.log1p(power * math.exp(harmonic / m_min - EULER_GAMMA))


def _max_survival(x, count, shape):
    # 1 - F(x)^K for K i.i.d. Gamma(shape, 1)
    tail = special.gammaincc(shape, x)
    return -np.expm1(count * np.log1p(-tail)) if tail < 1.0 else 1.0


def _max_density(x, count, shape):
    cdf = special.gammainc(shape, x)
    return count * cdf ** (count - 1) * stats.gamma.pdf(x, shape)


def _upper_limit(count, shape):
    return float(stats.gamma.isf(_TAIL_MASS / count, shape))


def _check_counts(count, shape):
    if count < 1 or shape < 1:
        raise ConfigurationError("K and shape must be at least 1")


@lru_cache(maxsize=None)
def mu_mean(count: int, shape: int) -> float:
    """E[max of K i.i.d. Gamma(s,1)] by quadrature of the survival function"""
    _check_counts(count, shape)
    x_max = _upper_limit(count, shape)
    knee = float(shape)
    head, _ = integrate.quad(
        _max_survival, 0.0, knee, args=(count, shape), epsabs=1e-14, epsrel=1e-12, limit=500
    )
    tail, _ = integrate.quad(
        _max_survival, knee, x_max, args=(count, shape), epsabs=1e-14, epsrel=1e-12, limit=500
    )
    return head + tail


@lru_cache(maxsize=None)
def mu_harm(count: int, shape: int) -> float:
    """(E[1/max of K i.i.d. Gamma(s,1)])^{-1}; finite only when K s > 1"""
    _check_counts(count, shape)
    if count * shape <= 1:
        raise DivergentConstant(
            f"constant undefined (divergent integral) for K={count}, shape={shape}"
        )

    def integrand(x):
        if x <= 0.0:
            # limit of the density over x at the origin
            if count * shape > 2:
                return 0.0
            scale = special.gamma(shape + 1) ** (count - 1) * special.gamma(shape)
            return count / scale if count * shape == 2 else math.inf
        return _max_density(x, count, shape) / x

    x_max = _upper_limit(count, shape)
    knee = float(shape)
    head, _ = integrate.quad(integrand, 0.0, knee, epsabs=1e-14, epsrel=1e-12, limit=500)
    tail, _ = integrate.quad(integrand, knee, x_max, epsabs=1e-14, epsrel=1e-12, limit=500)
    return 1.0 / (head + tail)


def mu_max_gamma(count: int, shape: int) -> Tuple[float, float]:
    """(mean, harmonic-mean) constants of the maximum of K Gamma(s,1) variables"""
    return mu_mean(count, shape), mu_harm(count, shape)


def theory_constants(cfg: SystemConfig) -> TheoryConstants:
    """Every constant used by the bounds for this scenario"""
    if cfg.primary_mode == PrimaryMode.BROADCAST:
        penalty = r_I(cfg.m, cfg.M, cfg.P_p / cfg.M)
    else:
        penalty = r_I(cfg.m, cfg.N, cfg.rho_p)

    def harm_or_none(count):
        try:
            return mu_harm(count, cfg.m)
        except DivergentConstant:
            return None

    return TheoryConstants(
        euler_gamma=EULER_GAMMA,
        R_I=penalty,
        mu1=mu_mean(cfg.N, cfg.m),
        mu2=harm_or_none(cfg.N),
        mu3=mu_mean(cfg.M, cfg.m),
        mu4=harm_or_none(cfg.M),
    )
