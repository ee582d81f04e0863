"""
Sum-power relaxation oracle for the interference-constrained MAC
"""

import numpy as np
from scipy.optimize import linprog

from core.exceptions import ConfigurationError


def sum_power_oracle(g_p: np.ndarray, rho_s: float, gamma: float) -> float:
    """
    Upper bound on the total secondary power of any feasible MAC schedule.

    The K per-constraint rows are summed into one budget KΓ over the column
    gains; the relaxed problem is a fractional knapsack filled greedily from the
    smallest cross-channel gain upward.
    """
    gains = np.sort(np.sum(np.abs(g_p) ** 2, axis=0))
    budget = g_p.shape[0] * gamma
    spent = np.cumsum(rho_s * gains)
    full = int(np.searchsorted(spent, budget, side="right"))
    total = rho_s * full
    if full < gains.size:
        used = spent[full - 1] if full > 0 else 0.0
        total += min(rho_s, (budget - used) / gains[full])
    return float(total)


def exact_sum_power_lp(g_p: np.ndarray, rho_s: float, gamma) -> float:
    """max Σρ_i s.t. [G_p diag(ρ) G_p^H]_ℓℓ <= Γ_ℓ, 0 <= ρ_i <= ρ_s (HiGHS)"""
    gains = np.abs(g_p) ** 2
    limits = np.broadcast_to(np.asarray(gamma, dtype=float), (gains.shape[0],))
    res = linprog(
        -np.ones(gains.shape[1]),
        A_ub=gains,
        b_ub=limits,
        bounds=[(0.0, rho_s)] * gains.shape[1],
        method="highs",
    )
    if res.status != 0:
        raise ConfigurationError(f"sum-power LP did not solve: {res.message}")
    return float(-res.fun)
