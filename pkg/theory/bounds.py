"""
Throughput bound evaluators for the secondary MAC and broadcast
"""

import math

from core.exceptions import ConfigurationError
from network.schemas import PrimaryMode, SecondaryMode, SystemConfig
from bc.scheduler import in_analyzed_regime
from .constants import mu_harm, mu_mean, r_I
from .schemas import BoundsReport

MAC_DROPPED = "O(n^{-1/(K+1)} log n) below the lower bound; O(n^{-1/(K+1)}) above the upper bound"
BC_DROPPED = "O(log log n / log n) below the lower bound; O(1) above the upper bound"


def _mac_exponent(cfg: SystemConfig) -> int:
    return cfg.N if cfg.primary_mode == PrimaryMode.BROADCAST else cfg.M


def thm3_upper_leading(cfg: SystemConfig, n: int) -> float:
    """(m/(K+1)) log n, leading term of the optimum MAC throughput"""
    if cfg.secondary_mode != SecondaryMode.MAC:
        raise ConfigurationError("leading MAC term needs a secondary MAC")
    return cfg.m / (_mac_exponent(cfg) + 1) * math.log(n)


def thm_mac_bounds(cfg: SystemConfig, n: int, gamma_n: float) -> BoundsReport:
    """Lower/upper throughput of threshold-based selection, remainders dropped"""
    if cfg.secondary_mode != SecondaryMode.MAC:
        raise ConfigurationError("MAC bounds need a secondary MAC")
    if gamma_n <= 0 or n < 1:
        raise ConfigurationError("MAC bounds need Γ_n > 0 and n >= 1")
    k = _mac_exponent(cfg)
    leading = thm3_upper_leading(cfg, n)
    offset = math.log(cfg.rho_s * gamma_n**k) / (k + 1)
    if cfg.primary_mode == PrimaryMode.BROADCAST:
        penalty = cfg.m * math.log1p(cfg.P_p)
        r_i = r_I(cfg.m, cfg.M, cfg.P_p / cfg.M)
    else:
        penalty = cfg.m * math.log1p(cfg.rho_p * cfg.N)
        r_i = r_I(cfg.m, cfg.N, cfg.rho_p)
    return BoundsReport(
        lower=leading + offset - penalty,
        upper=leading + offset - r_i,
        leading=leading,
        regime_ok=penalty >= r_i,
        dropped_terms=MAC_DROPPED,
    )


def mac_bounds_full_offset(cfg: SystemConfig, n: int, gamma_n: float) -> BoundsReport:
    """
    MAC bounds with the quota offset scaled by m/(K+1) instead of 1/(K+1).

    With k̄ active users, m log(ρ_s k̄) = (m/(K+1)) log(ρ_s Γ^K n), so every
    antenna carries the offset; thm_mac_bounds keeps the single-antenna scaling.
    """
    report = thm_mac_bounds(cfg, n, gamma_n)
    k = _mac_exponent(cfg)
    extra = (cfg.m - 1) / (k + 1) * math.log(cfg.rho_s * gamma_n**k)
    return report.model_copy(update={"lower": report.lower + extra, "upper": report.upper + extra})


def thm_bc_bounds(cfg: SystemConfig, n: int, gamma_n: float) -> BoundsReport:
    """Lower/upper throughput of random beamforming, remainders dropped"""
    if cfg.secondary_mode != SecondaryMode.BROADCAST:
        raise ConfigurationError("broadcast bounds need a secondary broadcast")
    if gamma_n <= 0 or n < 2:
        raise ConfigurationError("broadcast bounds need Γ_n > 0 and n >= 2")
    count = cfg.N if cfg.primary_mode == PrimaryMode.BROADCAST else cfg.M
    leading = cfg.m * math.log(gamma_n * math.log(n))
    lower = leading - cfg.m * math.log(mu_mean(count, cfg.m) + cfg.m * gamma_n / cfg.P_s)
    upper = leading - cfg.m * math.log(mu_harm(count, cfg.m))
    return BoundsReport(
        lower=lower,
        upper=upper,
        leading=leading,
        regime_ok=in_analyzed_regime(cfg),
        dropped_terms=BC_DROPPED,
    )


def bounds_for(cfg: SystemConfig, n: int, gamma_n: float) -> BoundsReport:
    if cfg.secondary_mode == SecondaryMode.MAC:
        return thm_mac_bounds(cfg, n, gamma_n)
    return thm_bc_bounds(cfg, n, gamma_n)


def leading_term(cfg: SystemConfig, n: int, gamma_n: float) -> float:
    """n-dependent part shared by both bounds"""
    if cfg.secondary_mode == SecondaryMode.MAC:
        return thm3_upper_leading(cfg, n)
    return cfg.m * math.log(gamma_n * math.log(n))


def unconstrained_leading(cfg: SystemConfig, n: int) -> float:
    """Leading growth without a primary: m log n (MAC), m log log n (broadcast)"""
    if cfg.secondary_mode == SecondaryMode.MAC:
        return cfg.m * math.log(n)
    if n < 3:
        raise ConfigurationError("log log n needs n >= 3")
    return cfg.m * math.log(math.log(n))


def compliance_ratio(cfg: SystemConfig, n: int) -> float:
    """Constrained over unconstrained leading growth: 1/(K+1) for MAC, 1 for broadcast"""
    if cfg.secondary_mode == SecondaryMode.MAC:
        if n < 2:
            raise ConfigurationError("compliance ratio needs n >= 2")
        return thm3_upper_leading(cfg, n) / unconstrained_leading(cfg, n)
    # m log log n growth is unaffected by the primary
    return cfg.m * math.log(math.log(n)) / unconstrained_leading(cfg, n)
