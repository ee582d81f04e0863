"""
Threshold-based user selection and sum rate for the secondary MAC
"""

import math
from typing import Tuple

import numpy as np

from core.exceptions import ConfigurationError
from core.linalg import logdet_hpd
from core.sampling import RandomStream
from network.schemas import PrimaryCovariance, SecondaryMode, SystemConfig
from network.utils import ChannelRealization, primary_covariance
from .schemas import MacSchedule, QuotaDesign


def design_quota(cfg: SystemConfig) -> QuotaDesign:
    """k̄ = (Γ/ρ_s)^{K/(K+1)} n^{1/(K+1)} with K primary constraints"""
    if cfg.secondary_mode != SecondaryMode.MAC:
        raise ConfigurationError("quota design applies to a secondary MAC only")
    k = cfg.constraint_count
    gamma = cfg.effective_gamma
    k_bar = (gamma / cfg.rho_s) ** (k / (k + 1)) * cfg.n ** (1.0 / (k + 1))
    return QuotaDesign(k_bar=k_bar, alpha=gamma / k_bar, cap=int(math.floor(k_bar)))


def eligibility_probability(alpha: float, rho_s: float, constraints: int) -> float:
    """Exact per-user eligibility probability (1 - e^{-α/ρ_s})^K"""
    return float((-math.expm1(-alpha / rho_s)) ** constraints)


def eligible_set(g_p: np.ndarray, alpha: float, rho_s: float) -> np.ndarray:
    """Users whose interference on every primary constraint stays strictly below α"""
    if alpha <= 0:
        raise ConfigurationError("interference quota must be positive")
    gains = rho_s * np.abs(g_p) ** 2
    return np.flatnonzero(np.all(gains < alpha, axis=0))


def select_active(eligible: np.ndarray, cap: int, stream: RandomStream) -> np.ndarray:
    """Uniform random cap-subset of the eligible users (partial Fisher-Yates)"""
    pool = np.sort(np.asarray(eligible, dtype=np.int64))
    if pool.size <= cap:
        return pool
    rng = stream.generator()
    for i in range(cap):
        j = int(rng.integers(i, pool.size))
        pool[i], pool[j] = pool[j], pool[i]
    return np.sort(pool[:cap])


def mac_sum_rate(
    h_s: np.ndarray, rho: float, g_s: np.ndarray, q_p: PrimaryCovariance
) -> float:
    """log det(I + ρ H_S H_S^H + G_s Q_p G_s^H) - log det(I + G_s Q_p G_s^H)"""
    identity = np.eye(g_s.shape[0], dtype=complex)
    background = identity + q_p.scale * (g_s @ g_s.conj().T)
    if h_s.shape[1] == 0:
        return 0.0
    signal = background + rho * (h_s @ h_s.conj().T)
    rate = logdet_hpd(signal) - logdet_hpd(background)
    return max(rate, 0.0)


def schedule_and_rate(
    cfg: SystemConfig, chan: ChannelRealization, stream: RandomStream
) -> Tuple[MacSchedule, float]:
    """Quota design, eligibility, random selection and on-off power for one block"""
    quota = design_quota(cfg)
    eligible = eligible_set(chan.G_p, quota.alpha, cfg.rho_s)
    active = select_active(eligible, quota.cap, stream)
    schedule = MacSchedule(eligible=eligible, active=active, per_user_power=cfg.rho_s)
    rate = mac_sum_rate(chan.H[:, active], cfg.rho_s, chan.G_s, primary_covariance(cfg))
    return schedule, rate


def gamma_power_law(gamma0: float, q: float, n: int) -> float:
    """Γ_n = Γ₀ n^{-q}"""
    if gamma0 <= 0 or q < 0:
        raise ConfigurationError("power-law schedule needs Γ₀ > 0 and q >= 0")
    return gamma0 * float(n) ** (-q)
