"""
Subcommands for the UnderlaySim command line

Each command takes a validated CliConfig and returns the exit status; failures
are raised as UnderlayError subclasses and mapped to exit codes by main.py.
"""

import math
import sys
from typing import Callable, Dict, List, Optional

import pandas as pd
import structlog

from core.exceptions import InvariantBreach, ValidationFailure
from montecarlo.checks import run_checks
from montecarlo.runner import run_sweep
from montecarlo.schemas import SweepRow
from theory.bounds import bounds_for
from .schemas import CliConfig, scenario_label

log = structlog.get_logger(__name__)

SWEEP_COLUMNS = [
    "scenario", "primary_mode", "n", "gamma", "trials",
    "mean_nats", "stderr_nats", "bound_lower_nats", "bound_upper_nats",
    "leading_term_nats", "violations",
]
BOUNDS_COLUMNS = ["n", "gamma", "lower_nats", "upper_nats", "leading_nats", "regime_ok"]

NATS_PER_BIT = math.log(2.0)


def to_bits(frame: pd.DataFrame) -> pd.DataFrame:
    """Rescale every *_nats column to bits and rename it"""
    rate_columns = [c for c in frame.columns if c.endswith("_nats")]
    converted = frame.copy()
    converted[rate_columns] = converted[rate_columns] / NATS_PER_BIT
    return converted.rename(columns={c: c[: -len("_nats")] + "_bits" for c in rate_columns})


def write_csv(frame: pd.DataFrame, out: Optional[str]) -> None:
    frame.to_csv(
        out if out else sys.stdout,
        index=False,
        float_format="%.10g",
        lineterminator="\n",
    )


def sweep_frame(rows: List[SweepRow], cli: CliConfig) -> pd.DataFrame:
    records = []
    for row in rows:
        records.append({
            "scenario": scenario_label(row.secondary_mode, row.primary_mode),
            "primary_mode": row.primary_mode.value,
            "n": row.n,
            "gamma": row.gamma,
            "trials": row.estimate.trials,
            "mean_nats": row.estimate.mean,
            "stderr_nats": row.estimate.stderr,
            "bound_lower_nats": row.bounds.lower,
            "bound_upper_nats": row.bounds.upper,
            "leading_term_nats": row.bounds.leading,
            "violations": row.violations,
        })
    frame = pd.DataFrame.from_records(records, columns=SWEEP_COLUMNS)
    return to_bits(frame) if cli.bits else frame


def _sweep(cli: CliConfig) -> int:
    rows = run_sweep(cli.experiment)
    write_csv(sweep_frame(rows, cli), cli.out)

    violations = sum(row.violations for row in rows)
    if violations:
        raise InvariantBreach(
            f"{violations} interference violations in scenario {cli.scenario}"
        )
    return 0


def cmd_mac_sweep(cli: CliConfig) -> int:
    """Secondary MAC throughput versus n, one CSV row per grid point"""
    return _sweep(cli)


def cmd_bc_sweep(cli: CliConfig) -> int:
    """Secondary broadcast throughput versus n, one CSV row per grid point"""
    return _sweep(cli)


def cmd_validate(cli: CliConfig) -> int:
    experiment = cli.experiment
    print("🔍 UnderlaySim validation")
    print("=" * 35)
    results = run_checks(
        names=cli.checks or None,
        trials=cli.check_trials,
        seed=experiment.seed,
        workers=experiment.workers,
        base=experiment.cfg,
    )
    for result in results:
        glyph = "✅" if result.passed else "❌"
        print(f"{glyph} {result.name}: {result.detail}")
        for note in result.notes:
            print(f"   ⚠️  {note}")

    failed = [result.name for result in results if not result.passed]
    if failed:
        raise ValidationFailure(f"failed checks: {', '.join(failed)}")
    print(f"\n🎉 All {len(results)} checks passed")
    return 0


def bounds_frame(cli: CliConfig) -> pd.DataFrame:
    experiment = cli.experiment
    records = []
    for n in experiment.n_grid:
        gamma = experiment.gamma_schedule.value(n)
        cfg = experiment.cfg.with_users(n).with_gamma(gamma)
        report = bounds_for(cfg, n, cfg.effective_gamma)
        records.append({
            "n": n,
            "gamma": gamma,
            "lower_nats": report.lower,
            "upper_nats": report.upper,
            "leading_nats": report.leading,
            "regime_ok": report.regime_ok,
        })
    frame = pd.DataFrame.from_records(records, columns=BOUNDS_COLUMNS)
    return to_bits(frame) if cli.bits else frame


def cmd_bounds(cli: CliConfig) -> int:
    """Closed-form bounds over the n grid, no simulation"""
    frame = bounds_frame(cli)
    print(f"📐 Bounds for scenario {cli.scenario}")
    print(frame.to_string(index=False))
    if not frame["regime_ok"].all():
        print("⚠️  Outside the analyzed regime: the bounds may not hold at these parameters")
        log.warning("regime_violation", scenario=cli.scenario)
    if cli.out:
        write_csv(frame, cli.out)
    return 0


COMMANDS: Dict[str, Callable[[CliConfig], int]] = {
    "mac-sweep": cmd_mac_sweep,
    "bc-sweep": cmd_bc_sweep,
    "validate": cmd_validate,
    "bounds": cmd_bounds,
}
