"""
Monte Carlo trial execution and n-sweeps for UnderlaySim
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import structlog

from bc.scheduler import assign_and_rate
from core.exceptions import ConfigurationError
from core.sampling import RandomStream, derive_stream_id
from mac.scheduler import schedule_and_rate
from network.schemas import SecondaryMode, SystemConfig
from network.utils import (
    constraint_limits,
    count_violations,
    draw_channels,
    interference_on_primary,
)
from theory.bounds import bounds_for
from .schemas import Estimate, ExperimentSpec, SweepRow

log = structlog.get_logger(__name__)


@dataclass(frozen=True)
class TrialOutcome:
    rate: float
    interference: np.ndarray
    violations: int


def trial_stream(seed: int, n: int, index: int) -> RandomStream:
    """Per-trial stream derived from (n, trial index) only"""
    return RandomStream(seed, derive_stream_id("trial", n, index))


def run_trial(cfg: SystemConfig, stream: RandomStream) -> TrialOutcome:
    """One block: draw channels, schedule, measure rate and primary interference"""
    chan = draw_channels(cfg, stream.child("channels"))
    limits = constraint_limits(cfg)
    if cfg.secondary_mode == SecondaryMode.MAC:
        schedule, rate = schedule_and_rate(cfg, chan, stream.child("selection"))
        q_s = np.full(schedule.active_count, schedule.per_user_power)
        interference = interference_on_primary(chan.G_p[:, schedule.active], q_s)
        violations = count_violations(interference, limits, strict=True)
    else:
        schedule, rate = assign_and_rate(cfg, chan, stream.child("beams"))
        q_s = np.full(cfg.m, schedule.power / cfg.m)
        interference = interference_on_primary(chan.G_p, q_s)
        violations = count_violations(interference, limits, strict=False)
    return TrialOutcome(rate=rate, interference=interference, violations=violations)


def _trial_block(cfg: SystemConfig, seed: int, indices: Sequence[int]) -> List[Tuple[float, int]]:
    results = []
    for index in indices:
        outcome = run_trial(cfg, trial_stream(seed, cfg.n, int(index)))
        results.append((outcome.rate, outcome.violations))
    return results


def simulate(cfg: SystemConfig, trials: int, seed: int, workers: int = 1) -> Tuple[np.ndarray, int]:
    """Per-trial rates in trial order plus the total violation count"""
    indices = np.arange(trials)
    if workers <= 1:
        blocks = [_trial_block(cfg, seed, indices)]
    else:
        chunks = [c for c in np.array_split(indices, workers * 4) if c.size]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_trial_block, [cfg] * len(chunks), [seed] * len(chunks), chunks))
    flat = [item for block in blocks for item in block]
    rates = np.array([rate for rate, _ in flat], dtype=float)
    violations = sum(v for _, v in flat)
    return rates, violations


def _estimate(rates: np.ndarray) -> Estimate:
    return Estimate(
        mean=float(np.mean(rates)),
        stderr=float(np.std(rates, ddof=1) / np.sqrt(rates.size)),
        trials=int(rates.size),
    )


def estimate_throughput(cfg: SystemConfig, trials: int, seed: int, workers: int = 1) -> Estimate:
    """Sample-mean throughput (nats) over independent channel draws"""
    if trials < 2:
        raise ConfigurationError("at least 2 trials are needed for a standard error")
    rates, _ = simulate(cfg, trials, seed, workers)
    estimate = _estimate(rates)
    log.info("estimate_done", n=cfg.n, trials=trials, mean=estimate.mean, stderr=estimate.stderr)
    return estimate


def run_sweep(spec: ExperimentSpec) -> List[SweepRow]:
    """One row per grid point: Γ(n), estimate, bounds and violation count"""
    if spec.trials < 2:
        raise ConfigurationError("at least 2 trials are needed for a standard error")
    rows = []
    for n in spec.n_grid:
        gamma = spec.gamma_schedule.value(n)
        cfg = spec.cfg.with_users(n).with_gamma(gamma)
        rates, violations = simulate(cfg, spec.trials, spec.seed, spec.workers)
        estimate = _estimate(rates)
        rows.append(
            SweepRow(
                n=n,
                gamma=gamma,
                estimate=estimate,
                bounds=bounds_for(cfg, n, cfg.effective_gamma),
                violations=violations,
                secondary_mode=cfg.secondary_mode,
                primary_mode=cfg.primary_mode,
            )
        )
        log.info("sweep_point", n=n, gamma=gamma, mean=estimate.mean, violations=violations)
    return rows
