"""
Extreme-value sequences and the closed-form cdf of the lower SINR variable
"""

import math

import numpy as np

from core.exceptions import ConfigurationError
from core.sampling import RandomStream
from .schemas import AsymptoticSeq


def lemma3_sequences(n: float, rho: float, m: int, M: int) -> AsymptoticSeq:
    """
    Leading terms of b_n, d_n (and a_n = c_n = ρ/m) for a given power ρ.

    O(log log log n) and O(1/log n) remainders are not included.
    """
    if n < 16:
        raise ConfigurationError("sequences need n >= 16 so that log log n > 0")
    if rho <= 0:
        raise ConfigurationError("power must be positive")
    log_n = math.log(n)
    loglog_n = math.log(log_n)
    scale = rho / m
    return AsymptoticSeq(
        b_n=scale * log_n - scale * (m + M - 1) * loglog_n,
        d_n=scale * log_n - scale * M * loglog_n,
        a_n=scale,
        c_n=scale,
        rho=rho,
        m=m,
        M=M,
    )


def cdf_L(x, c: float, theta: float, k: int):
    """F_L(x) = 1 - e^{-cx} (1 + θx)^{-k}"""
    x = np.asarray(x, dtype=float)
    value = -np.expm1(-c * x - k * np.log1p(theta * x))
    return float(value) if value.ndim == 0 else value


def sample_L(stream: RandomStream, count: int, c: float, theta: float, k: int) -> np.ndarray:
    """Draws of Z/(c + θY) with Z ~ Exp(1), Y ~ Gamma(k, 1)"""
    rng = stream.generator()
    z = rng.standard_exponential(count)
    y = rng.standard_gamma(k, count)
    return z / (c + theta * y)
