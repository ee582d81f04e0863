"""
Channel drawing and interference measurement for UnderlaySim
"""

from dataclasses import dataclass

import numpy as np

from core.exceptions import ConfigurationError
from core.sampling import RandomStream, cn_matrix
from .schemas import PrimaryCovariance, PrimaryMode, SecondaryMode, SystemConfig

# Relative slack for "<= Γ" checks when the power cap is interference-binding
BINDING_RTOL = 1e-12


@dataclass(frozen=True)
class ChannelRealization:
    """One block-fading draw of H, G_s and G_p"""

    H: np.ndarray
    G_s: np.ndarray
    G_p: np.ndarray


def channel_shapes(cfg: SystemConfig) -> dict:
    """Matrix shapes keyed by name for the configured scenario"""
    if cfg.secondary_mode == SecondaryMode.MAC:
        receivers, transmitters = cfg.m, cfg.n
        h_shape = (cfg.m, cfg.n)
    else:
        receivers, transmitters = cfg.n, cfg.m
        h_shape = (cfg.n, cfg.m)
    return {
        "H": h_shape,
        "G_s": (receivers, cfg.primary_streams),
        "G_p": (cfg.constraint_count, transmitters),
    }


def draw_channels(cfg: SystemConfig, stream: RandomStream) -> ChannelRealization:
    """Draw every channel matrix with i.i.d. CN(0,1) entries"""
    rng = stream.generator()
    shapes = channel_shapes(cfg)
    # Full n-user H is drawn so that selection cannot bias it
    h = cn_matrix(rng, *shapes["H"])
    g_s = cn_matrix(rng, *shapes["G_s"])
    g_p = cn_matrix(rng, *shapes["G_p"])
    return ChannelRealization(H=h, G_s=g_s, G_p=g_p)


def primary_covariance(cfg: SystemConfig) -> PrimaryCovariance:
    """Q_p = rho_p I_N for a primary MAC, (P_p/M) I_M for a primary broadcast"""
    if cfg.primary_mode == PrimaryMode.MAC:
        return PrimaryCovariance(dim=cfg.N, scale=cfg.rho_p)
    return PrimaryCovariance(dim=cfg.M, scale=cfg.P_p / cfg.M)


def interference_on_primary(g_p: np.ndarray, q_s) -> np.ndarray:
    """
    Diagonal of G_p Q_s G_p^H, one entry per primary constraint.

    q_s may be a full Hermitian matrix or a 1-D vector holding its diagonal.
    """
    q_s = np.asarray(q_s)
    if q_s.ndim == 1:
        if q_s.shape[0] != g_p.shape[1]:
            raise ConfigurationError(
                f"G_p has {g_p.shape[1]} columns but Q_s has dimension {q_s.shape[0]}"
            )
        return (np.abs(g_p) ** 2) @ np.real(q_s)
    if q_s.shape != (g_p.shape[1], g_p.shape[1]):
        raise ConfigurationError(
            f"G_p has {g_p.shape[1]} columns but Q_s has shape {q_s.shape}"
        )
    values = np.real(np.einsum("li,ij,lj->l", g_p, q_s, g_p.conj()))
    return np.maximum(values, 0.0)


def constraint_limits(cfg: SystemConfig) -> np.ndarray:
    """Per-constraint tolerances; Γ everywhere unless listed explicitly"""
    if cfg.tolerances is None:
        return np.full(cfg.constraint_count, cfg.gamma)
    return np.asarray(cfg.tolerances, dtype=float)


def count_violations(interference: np.ndarray, limits: np.ndarray, strict: bool) -> int:
    """Constraints breached: '<' required when strict, '<=' otherwise"""
    if strict:
        return int(np.count_nonzero(interference >= limits))
    return int(np.count_nonzero(interference > limits * (1.0 + BINDING_RTOL)))
