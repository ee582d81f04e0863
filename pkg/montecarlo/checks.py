"""
Validation checks for UnderlaySim

Each check runs a property of the schedulers or the closed forms against
simulation and returns a CheckResult; `run_checks` drives them for the CLI.
"""

import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel

from bc.scheduler import in_analyzed_regime, sandwich_maxima, sandwich_tables, secondary_tx_power
from core.exceptions import ConfigurationError
from core.sampling import RandomStream, sample_cn_matrix, sample_haar_beams
from mac.scheduler import design_quota, eligibility_probability, eligible_set, schedule_and_rate
from network.schemas import PrimaryMode, SecondaryMode, SystemConfig
from network.utils import draw_channels
from theory.bounds import mac_bounds_full_offset
from theory.constants import mu_harm, mu_mean
from theory.oracle import exact_sum_power_lp, sum_power_oracle
from theory.sequences import cdf_L, lemma3_sequences, sample_L
from .runner import estimate_throughput, run_sweep, simulate, trial_stream
from .schemas import ExperimentSpec, GammaSchedule, SweepRow
from .stats import fit_slope, ks_critical_value, ks_distance

log = structlog.get_logger(__name__)

REFERENCE_CONFIG = SystemConfig(M=2, N=2, m=4, P_p=5.0, rho_p=5.0, P_s=5.0, rho_s=5.0, gamma=2.0)

MAC_GRID = [1000, 3000, 10_000, 30_000, 100_000]
BC_GRID = [1000, 10_000, 100_000]
MAC_BAND_SLACK = 1.0
BC_BAND_SLACK = 1.5
MAC_SLOPE_RTOL = 0.25
BC_SLOPE_RTOL = 0.30
POWER_LAW_EXPONENTS = (0.1, 0.2)
LOG_LAW_EXPONENTS = (0.5, 0.8)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str
    notes: List[str] = []


def _retarget(base: SystemConfig, **update) -> SystemConfig:
    """Copy of base for another scenario; explicit tolerances stay when their count still fits"""
    cfg = base.model_copy(update=update)
    if cfg.tolerances is not None and len(cfg.tolerances) != cfg.constraint_count:
        log.warning(
            "tolerances_dropped",
            primary_mode=cfg.primary_mode.value,
            given=len(cfg.tolerances),
            constraints=cfg.constraint_count,
        )
        cfg = cfg.model_copy(update={"tolerances": None})
    return cfg


def _scenarios(base: SystemConfig, n: int) -> List[SystemConfig]:
    return [
        _retarget(base, n=n, secondary_mode=s, primary_mode=p)
        for s in (SecondaryMode.MAC, SecondaryMode.BROADCAST)
        for p in (PrimaryMode.BROADCAST, PrimaryMode.MAC)
    ]


def _label(cfg: SystemConfig) -> str:
    return f"{cfg.secondary_mode.value}-{cfg.primary_mode.value}"


def check_interference(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Zero interference violations in all four scenarios"""
    details = []
    total = 0
    for cfg in _scenarios(base, 1000):
        _, violations = simulate(cfg, trials, seed, workers)
        total += violations
        limits = "tolerances" if cfg.tolerances is not None else "Γ"
        details.append(f"{_label(cfg)}: {violations} ({limits})")
    return CheckResult(
        name="interference",
        passed=total == 0,
        detail=f"violations over {trials} trials each ({', '.join(details)})",
    )


def check_binomial(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Mean eligible-set size against n (1 - e^{-α/ρ_s})^N"""
    cfg = base.model_copy(update={"n": 10_000, "secondary_mode": SecondaryMode.MAC})
    quota = design_quota(cfg)
    p = eligibility_probability(quota.alpha, cfg.rho_s, cfg.constraint_count)
    sizes = np.empty(trials)
    for index in range(trials):
        stream = trial_stream(seed, cfg.n, index).child("eligibility")
        g_p = sample_cn_matrix(stream, cfg.constraint_count, cfg.n)
        sizes[index] = eligible_set(g_p, quota.alpha, cfg.rho_s).size
    expected = cfg.n * p
    tolerance = 3.0 * math.sqrt(cfg.n * p * (1.0 - p) / trials)
    gap = abs(sizes.mean() - expected)
    return CheckResult(
        name="binomial",
        passed=bool(gap <= tolerance),
        detail=f"mean |A| {sizes.mean():.4f} vs np {expected:.4f} (tolerance {tolerance:.4f})",
    )


def check_sandwich(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """L <= SINR <= U for every user and beam in the analyzed regime"""
    cfg = base.model_copy(update={"n": 200, "secondary_mode": SecondaryMode.BROADCAST})
    breaches = 0
    for index in range(trials):
        stream = trial_stream(seed, cfg.n, index)
        chan = draw_channels(cfg, stream.child("channels"))
        beams = sample_haar_beams(stream.child("beams"), cfg.m)
        power = secondary_tx_power(chan.G_p, cfg)
        lower, exact, upper = sandwich_tables(cfg, chan, beams, power)
        breaches += int(np.count_nonzero((lower > exact) | (exact > upper)))
    return CheckResult(
        name="sandwich",
        passed=breaches == 0,
        detail=f"{breaches} ordering breaches over {trials} trials",
    )


def check_ks(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Synthesized lower SINR variables against the closed-form cdf"""
    size = 100_000
    critical = ks_critical_value(size)
    # (c, θ, k); the first is the configured scenario at 𝒫 = P_s
    scenario = (
        base.m / base.P_s,
        base.m * base.primary_stream_power / base.P_s,
        base.m + base.primary_streams - 1,
    )
    configurations = list(dict.fromkeys([
        scenario, (0.8, 2.0, 5), (1.0, 1.0, 1), (0.5, 1.5, 2), (2.0, 4.0, 3), (0.1, 1.0, 8),
    ]))[:5]
    worst = 0.0
    for index, (c, theta, k) in enumerate(configurations):
        samples = sample_L(RandomStream(seed, index).child("ks"), size, c, theta, k)
        distance = ks_distance(samples, lambda x, c=c, t=theta, k=k: cdf_L(x, c, t, k))
        worst = max(worst, distance)
    return CheckResult(
        name="ks",
        passed=bool(worst < critical),
        detail=f"largest KS distance {worst:.5f} vs critical {critical:.5f}",
    )


def check_mu(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Quadrature constants against analytic values and Monte Carlo"""
    errors = [abs(mu_mean(k, 1) - sum(1.0 / i for i in range(1, k + 1))) for k in range(1, 11)]
    errors.append(abs(mu_harm(2, 1) - 1.0 / (2.0 * math.log(2.0))))
    analytic_ok = bool(max(errors) <= 1e-8)

    rng = RandomStream(seed).child("mu").generator()
    total, total_sq, count = 0.0, 0.0, 0
    for _ in range(10):
        block = rng.standard_gamma(base.m, size=(1_000_000, base.N)).max(axis=1)
        total += block.sum()
        total_sq += np.square(block).sum()
        count += block.size
    mean = total / count
    sigma = math.sqrt((total_sq / count - mean**2) / count)
    reference = mu_mean(base.N, base.m)
    mc_ok = bool(abs(mean - reference) <= 3.0 * sigma)
    return CheckResult(
        name="mu",
        passed=analytic_ok and mc_ok,
        detail=(
            f"analytic error {max(errors):.2e}; mu_mean({base.N},{base.m}) {reference:.6f} "
            f"vs Monte Carlo {mean:.6f} ± {3 * sigma:.6f}"
        ),
    )


def check_oracle(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Relaxed sum power dominates the exact LP and every threshold schedule"""
    rng = RandomStream(seed).child("oracle").generator()
    lp_failures = 0
    for _ in range(trials):
        g_p = (rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))) / np.sqrt(2.0)
        rho_s, gamma = rng.uniform(0.5, 5.0), rng.uniform(0.1, 3.0)
        if sum_power_oracle(g_p, rho_s, gamma) < exact_sum_power_lp(g_p, rho_s, gamma) - 1e-9:
            lp_failures += 1

    cfg = base.model_copy(update={"n": 1000, "secondary_mode": SecondaryMode.MAC})
    schedule_failures = 0
    for index in range(trials):
        stream = trial_stream(seed, cfg.n, index)
        chan = draw_channels(cfg, stream.child("channels"))
        schedule, _ = schedule_and_rate(cfg, chan, stream.child("selection"))
        if sum_power_oracle(chan.G_p, cfg.rho_s, cfg.effective_gamma) < cfg.rho_s * schedule.active_count:
            schedule_failures += 1
    return CheckResult(
        name="oracle",
        passed=lp_failures == 0 and schedule_failures == 0,
        detail=f"{lp_failures} LP exceptions, {schedule_failures} schedule exceptions",
    )


def _beam_maxima(cfg: SystemConfig, trials: int, seed: int, power: Optional[float] = None):
    # first-beam maxima; beams are symmetric so one suffices
    lows, exacts, highs = [], [], []
    for index in range(trials):
        stream = trial_stream(seed, cfg.n, index)
        chan = draw_channels(cfg, stream.child("channels"))
        beams = sample_haar_beams(stream.child("beams"), cfg.m)
        block_power = secondary_tx_power(chan.G_p, cfg) if power is None else power
        lower, exact, upper = sandwich_maxima(cfg, chan, beams, block_power)
        lows.append(lower[0])
        exacts.append(exact[0])
        highs.append(upper[0])
    return np.array(lows), np.array(exacts), np.array(highs)


def check_concentration(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Maxima of L and U around the extreme-value sequences at a fixed power"""
    cfg = base.model_copy(update={"n": 10_000, "secondary_mode": SecondaryMode.BROADCAST})
    rho = cfg.P_s
    seq = lemma3_sequences(cfg.n, rho, cfg.m, cfg.primary_streams)
    slack = rho / cfg.m * math.log(math.log(cfg.n))
    lows, _, highs = _beam_maxima(cfg, trials, seed, power=rho)
    above = float(np.mean(lows >= seq.b_n - slack))
    below = float(np.mean(highs < seq.d_n + slack))
    return CheckResult(
        name="concentration",
        passed=bool(above >= 0.95 and below >= 0.80),
        detail=f"Pr(L_max >= b_n - slack) {above:.4f}; Pr(U_max < d_n + slack) {below:.4f}",
    )


def check_ordering(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """E log(1+L_max) <= E log(1+SINR_max) <= E log(1+U_max) within 3σ"""
    passed = True
    parts = []
    for n in (100, 1000):
        cfg = base.model_copy(update={"n": n, "secondary_mode": SecondaryMode.BROADCAST})
        lows, exacts, highs = _beam_maxima(cfg, trials, seed)
        means = [float(np.mean(np.log1p(v))) for v in (lows, exacts, highs)]
        sigma = max(float(np.std(np.log1p(v), ddof=1)) for v in (lows, exacts, highs))
        band = 3.0 * sigma / math.sqrt(trials)
        ok = bool(means[0] <= means[1] + band and means[1] <= means[2] + band)
        passed = passed and ok
        parts.append(f"n={n}: {means[0]:.4f} <= {means[1]:.4f} <= {means[2]:.4f}")
    return CheckResult(name="ordering", passed=passed, detail="; ".join(parts))


def check_determinism(
    base: SystemConfig, trials: int, seed: int, workers: int = 1
) -> CheckResult:
    """Same seed gives bit-identical estimates for 1 and several workers"""
    cfg = base.with_users(200)
    count = max(trials, 2)
    first = estimate_throughput(cfg, count, seed, 1)
    second = estimate_throughput(cfg, count, seed, max(workers, 2))
    return CheckResult(
        name="determinism",
        passed=bool(first == second),
        detail=f"mean {first.mean!r} vs {second.mean!r}",
    )


def _sweep(
    base: SystemConfig,
    secondary: SecondaryMode,
    primary: PrimaryMode,
    grid: Sequence[int],
    trials: int,
    seed: int,
    workers: int,
    schedule: Optional[GammaSchedule] = None,
) -> Tuple[SystemConfig, List[SweepRow]]:
    cfg = _retarget(base, n=grid[0], secondary_mode=secondary, primary_mode=primary)
    spec = ExperimentSpec(
        cfg=cfg,
        n_grid=list(grid),
        trials=trials,
        seed=seed,
        gamma_schedule=schedule or GammaSchedule(gamma0=cfg.gamma),
        workers=workers,
    )
    return cfg, run_sweep(spec)


def _within(value: float, target: float, rtol: float) -> bool:
    return bool(abs(value - target) <= rtol * abs(target))


def _separated(upper: Sequence[SweepRow], lower: Sequence[SweepRow]) -> bool:
    """upper sits above lower past the first grid point, 3σ bands apart"""
    return all(
        a.estimate.mean - 3.0 * a.estimate.stderr > b.estimate.mean + 3.0 * b.estimate.stderr
        for a, b in zip(upper[1:], lower[1:])
    )


def mac_band_misses(
    rows: Sequence[SweepRow], cfg: SystemConfig, slack: float = MAC_BAND_SLACK
) -> Tuple[List[int], List[int]]:
    """
    Grid points whose mean leaves [lower - slack, upper + slack].

    Returns the misses against the reported bounds (offset log(ρ_s Γ^K)/(K+1))
    and against the same bounds with the offset scaled by m/(K+1).
    """
    stated, scaled = [], []
    for row in rows:
        point = cfg.with_users(row.n).with_gamma(row.gamma)
        full = mac_bounds_full_offset(point, row.n, point.effective_gamma)
        mean = row.estimate.mean
        if not row.bounds.lower - slack <= mean <= row.bounds.upper + slack:
            stated.append(row.n)
        if not full.lower - slack <= mean <= full.upper + slack:
            scaled.append(row.n)
    return stated, scaled


def check_mac_bands(
    base: SystemConfig, trials: int, seed: int, workers: int = 1, grid: Sequence[int] = MAC_GRID
) -> CheckResult:
    """Secondary MAC slope against log n and band around (m/(K+1)) log n, both primaries"""
    passed = True
    parts, notes = [], []
    for primary in (PrimaryMode.BROADCAST, PrimaryMode.MAC):
        cfg, rows = _sweep(base, SecondaryMode.MAC, primary, grid, trials, seed, workers)
        target = cfg.m / (cfg.constraint_count + 1)
        slope = fit_slope(rows, "log")
        stated, scaled = mac_band_misses(rows, cfg)
        slope_ok = _within(slope, target, MAC_SLOPE_RTOL)
        passed = passed and slope_ok and not scaled
        excess = ", ".join(f"{row.estimate.mean - row.bounds.leading:.3f}" for row in rows)
        parts.append(
            f"{_label(cfg)}: slope {slope:.3f} vs {target:.3f}; "
            f"mean - leading [{excess}]; misses {scaled or 'none'}"
        )
        if stated:
            notes.append(
                f"{_label(cfg)}: n={stated} outside the band of the 1/(K+1)-scaled offset "
                f"reported by the bounds; the m/(K+1)-scaled offset band "
                + ("holds" if not scaled else f"misses n={scaled}")
            )
    return CheckResult(name="mac_bands", passed=passed, detail="; ".join(parts), notes=notes)


def check_mac_tradeoff(
    base: SystemConfig, trials: int, seed: int, workers: int = 1, grid: Sequence[int] = MAC_GRID
) -> CheckResult:
    """Γ = Γ₀ n^{-q}: the larger q runs below and grows more slowly"""
    curves, slopes, targets = {}, {}, {}
    for q in POWER_LAW_EXPONENTS:
        schedule = GammaSchedule(kind="power_law", gamma0=base.gamma, q=q)
        cfg, curves[q] = _sweep(
            base, SecondaryMode.MAC, base.primary_mode, grid, trials, seed, workers, schedule
        )
        slopes[q] = fit_slope(curves[q], "log")
        k = cfg.constraint_count
        targets[q] = (cfg.m - q * k) / (k + 1)
    small, large = POWER_LAW_EXPONENTS
    below = _separated(curves[small], curves[large])
    ordered = slopes[small] > slopes[large]
    detail = "; ".join(
        f"q={q}: slope {slopes[q]:.3f} (target {targets[q]:.3f}), "
        f"means [{', '.join(f'{row.estimate.mean:.3f}' for row in curves[q])}]"
        for q in POWER_LAW_EXPONENTS
    )
    return CheckResult(
        name="mac_tradeoff",
        passed=bool(below and ordered),
        detail=f"{detail}; q={large} below: {below}; slopes ordered: {ordered}",
    )


def check_bc_bands(
    base: SystemConfig, trials: int, seed: int, workers: int = 1, grid: Sequence[int] = BC_GRID
) -> CheckResult:
    """Secondary broadcast slope against log log n and band around m log(Γ log n)"""
    cfg, rows = _sweep(base, SecondaryMode.BROADCAST, base.primary_mode, grid, trials, seed, workers)
    slope = fit_slope(rows, "loglog")
    slope_ok = _within(slope, cfg.m, BC_SLOPE_RTOL)
    misses = [
        row.n
        for row in rows
        if not row.bounds.lower - BC_BAND_SLACK <= row.estimate.mean <= row.bounds.upper + BC_BAND_SLACK
    ]
    notes = []
    if not in_analyzed_regime(cfg):
        notes.append(f"{_label(cfg)}: m q_p / P_s < 1, the bounds are outside their regime")
    excess = ", ".join(f"{row.estimate.mean - row.bounds.leading:.3f}" for row in rows)
    return CheckResult(
        name="bc_bands",
        passed=bool(slope_ok and not misses),
        detail=(
            f"{_label(cfg)}: slope {slope:.3f} vs {cfg.m}; "
            f"mean - leading [{excess}]; misses {misses or 'none'}"
        ),
        notes=notes,
    )


def check_bc_tradeoff(
    base: SystemConfig, trials: int, seed: int, workers: int = 1, grid: Sequence[int] = BC_GRID
) -> CheckResult:
    """Γ = Γ₀ (log n)^{-q}: the larger q runs below, slopes near (1 - q) m"""
    curves, slopes, targets = {}, {}, {}
    for q in LOG_LAW_EXPONENTS:
        schedule = GammaSchedule(kind="log_law", gamma0=base.gamma, q=q)
        cfg, curves[q] = _sweep(
            base, SecondaryMode.BROADCAST, base.primary_mode, grid, trials, seed, workers, schedule
        )
        slopes[q] = fit_slope(curves[q], "loglog")
        targets[q] = (1.0 - q) * cfg.m
    small, large = LOG_LAW_EXPONENTS
    below = _separated(curves[small], curves[large])
    slopes_ok = all(_within(slopes[q], targets[q], BC_SLOPE_RTOL) for q in LOG_LAW_EXPONENTS)
    notes = [
        f"q={large} gives the smaller Γ(n) and is checked as the lower curve; "
        f"a q={large} curve above q={small} would contradict Γ-monotone throughput"
    ]
    if _separated(curves[large], curves[small]):
        notes.append(f"q={large} observed above q={small}")
    detail = "; ".join(
        f"q={q}: slope {slopes[q]:.3f} (target {targets[q]:.3f}), "
        f"means [{', '.join(f'{row.estimate.mean:.3f}' for row in curves[q])}]"
        for q in LOG_LAW_EXPONENTS
    )
    return CheckResult(
        name="bc_tradeoff",
        passed=bool(below and slopes_ok),
        detail=f"{detail}; q={large} below: {below}",
        notes=notes,
    )


CHECKS: Dict[str, Callable[..., CheckResult]] = {
    "interference": check_interference,
    "binomial": check_binomial,
    "sandwich": check_sandwich,
    "ks": check_ks,
    "mu": check_mu,
    "oracle": check_oracle,
    "concentration": check_concentration,
    "ordering": check_ordering,
    "determinism": check_determinism,
    "mac_bands": check_mac_bands,
    "mac_tradeoff": check_mac_tradeoff,
    "bc_bands": check_bc_bands,
    "bc_tradeoff": check_bc_tradeoff,
}

DEFAULT_TRIALS = {
    "interference": 10_000,
    "binomial": 5000,
    "sandwich": 2000,
    "ks": 1,
    "mu": 1,
    "oracle": 10_000,
    "concentration": 2000,
    "ordering": 2000,
    "determinism": 50,
    "mac_bands": 2000,
    "mac_tradeoff": 2000,
    "bc_bands": 2000,
    "bc_tradeoff": 2000,
}


def run_checks(
    names: Optional[Sequence[str]] = None,
    trials: Optional[int] = None,
    seed: int = 20091,
    workers: int = 1,
    base: SystemConfig = REFERENCE_CONFIG,
) -> List[CheckResult]:
    selected = list(names) if names else list(CHECKS)
    unknown = [name for name in selected if name not in CHECKS]
    if unknown:
        raise ConfigurationError(f"unknown checks: {', '.join(unknown)}")
    results = []
    for name in selected:
        result = CHECKS[name](base, trials or DEFAULT_TRIALS[name], seed, workers)
        log.info("check_done", check=name, passed=result.passed)
        for note in result.notes:
            log.warning("check_note", check=name, note=note)
        results.append(result)
    return results
