"""
Random beamforming with interference-capped power for the secondary broadcast
"""

import math
from typing import Tuple

import numpy as np
import structlog

from core.exceptions import ConfigurationError
from core.sampling import RandomStream, sample_haar_beams
from network.schemas import SecondaryMode, SystemConfig
from network.utils import ChannelRealization, constraint_limits
from .schemas import BcSchedule, SinrSandwich

log = structlog.get_logger(__name__)


def secondary_tx_power(g_p: np.ndarray, cfg: SystemConfig) -> float:
    """min over rows of mΓ_ℓ/|g_{p,ℓ}|², capped at P_s"""
    row_gain = np.sum(np.abs(g_p) ** 2, axis=1)
    limits = constraint_limits(cfg)
    degenerate = row_gain <= 0.0
    if np.any(degenerate):
        log.warning("degenerate_cross_row", rows=np.flatnonzero(degenerate).tolist())
    with np.errstate(divide="ignore"):
        caps = np.where(degenerate, np.inf, cfg.m * limits / np.where(degenerate, 1.0, row_gain))
    return float(min(np.min(caps, initial=np.inf), cfg.P_s))


def beam_gains(h: np.ndarray, beams: np.ndarray) -> np.ndarray:
    """|h_i^H φ_j|² for every user i (rows of H) and beam j"""
    return np.abs(h @ beams) ** 2


def _denominators(gains, cross, m, power, theta):
    # SINR written as gain / (m/𝒫 + intra + θ|g_s|²); same association order
    # for the sandwich variables keeps L <= SINR <= U exact in floating point
    base = m / power
    intra = gains.sum(axis=-1, keepdims=True) - gains
    exact = (base + intra) + theta * cross
    lower = (base + theta * intra) + theta * cross
    upper = base + theta * cross
    return lower, exact, upper


def sinr_matrix(
    h: np.ndarray, beams: np.ndarray, power: float, g_s: np.ndarray, q_p: float
) -> np.ndarray:
    """SINR of every user on every beam under equal power split"""
    m = beams.shape[1]
    gains = beam_gains(h, beams)
    cross = np.sum(np.abs(g_s) ** 2, axis=1, keepdims=True)
    _, exact, _ = _denominators(gains, cross, m, power, m * q_p / power)
    return gains / exact


def sinr(
    i: int,
    j: int,
    h: np.ndarray,
    beams: np.ndarray,
    power: float,
    g_s: np.ndarray,
    q_p: float,
) -> float:
    """SINR of user i on beam j"""
    if power <= 0:
        raise ConfigurationError("transmit power must be positive")
    m = beams.shape[1]
    gains = np.abs(h[i] @ beams) ** 2
    cross = float(np.vdot(g_s[i], g_s[i]).real)
    _, exact, _ = _denominators(gains, cross, m, power, m * q_p / power)
    return float(gains[j] / exact[j])


def assign_and_rate(
    cfg: SystemConfig, chan: ChannelRealization, stream: RandomStream
) -> Tuple[BcSchedule, float]:
    """Draw beams, give each to its max-SINR user, sum the per-beam rates"""
    if cfg.secondary_mode != SecondaryMode.BROADCAST:
        raise ConfigurationError("random beamforming applies to a secondary broadcast only")
    beams = sample_haar_beams(stream, cfg.m)
    power = secondary_tx_power(chan.G_p, cfg)
    table = sinr_matrix(chan.H, beams, power, chan.G_s, cfg.primary_stream_power)
    winners = np.argmax(table, axis=0)
    best = table[winners, np.arange(cfg.m)]
    schedule = BcSchedule(beams=beams, power=power, winners=winners, winning_sinr=best)
    return schedule, float(np.sum(np.log1p(best)))


def theta_for(cfg: SystemConfig, power: float) -> float:
    """θ = m q_p / 𝒫; equals mP_p/(M𝒫) under a primary broadcast"""
    return cfg.m * cfg.primary_stream_power / power


def in_analyzed_regime(cfg: SystemConfig) -> bool:
    """θ >= 1 for every admissible power, i.e. m q_p / P_s >= 1"""
    return theta_for(cfg, cfg.P_s) >= 1.0


def sinr_sandwich(
    i: int,
    j: int,
    chan: ChannelRealization,
    beams: np.ndarray,
    power: float,
    cfg: SystemConfig,
) -> SinrSandwich:
    """Lower/upper variables L_i, U_i around SINR_i for beam j"""
    theta = theta_for(cfg, power)
    gains = np.abs(chan.H[i] @ beams) ** 2
    cross = float(np.vdot(chan.G_s[i], chan.G_s[i]).real)
    lower, exact, upper = _denominators(gains, cross, cfg.m, power, theta)
    return SinrSandwich(
        L=float(gains[j] / lower[j]),
        S=float(gains[j] / exact[j]),
        U=float(gains[j] / np.broadcast_to(upper, gains.shape)[j]),
        theta=theta,
    )


def sandwich_tables(
    cfg: SystemConfig, chan: ChannelRealization, beams: np.ndarray, power: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """L, SINR and U for every user (rows) and beam (columns)"""
    gains = beam_gains(chan.H, beams)
    cross = np.sum(np.abs(chan.G_s) ** 2, axis=1, keepdims=True)
    lower, exact, upper = _denominators(gains, cross, cfg.m, power, theta_for(cfg, power))
    return gains / lower, gains / exact, gains / upper


def sandwich_maxima(
    cfg: SystemConfig, chan: ChannelRealization, beams: np.ndarray, power: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-beam maxima over users of L, SINR and U"""
    lower, exact, upper = sandwich_tables(cfg, chan, beams, power)
    return lower.max(axis=0), exact.max(axis=0), upper.max(axis=0)


def gamma_log_law(gamma0: float, q: float, n: int) -> float:
    """Γ_n = Γ₀ (log n)^{-q}"""
    if n <= 2:
        raise ConfigurationError("log-law schedule needs n >= 3")
    if gamma0 <= 0 or not 0 <= q < 1:
        raise ConfigurationError("log-law schedule needs Γ₀ > 0 and 0 <= q < 1")
    return gamma0 * math.log(n) ** (-q)
