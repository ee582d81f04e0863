"""
Layered configuration for the UnderlaySim command line

Built-in defaults are overridden by a flat key=value file (--config), which
is overridden by flags. Every layer is validated by the pydantic schemas;
validation errors surface as ConfigurationError (exit 2).
"""

import argparse
import os
from typing import Dict, List, Optional, Sequence

from dotenv import dotenv_values
from pydantic import ValidationError

import settings
from core.exceptions import ConfigurationError
from montecarlo.checks import CHECKS
from montecarlo.schemas import ExperimentSpec, GammaSchedule
from network.schemas import PrimaryMode, SecondaryMode, SystemConfig
from .schemas import SCENARIOS, CliConfig

DEFAULT_N_GRID = [100, 300, 1000, 3000, 10000]
DEFAULT_TRIALS = 2000

SYSTEM_KEYS = {
    "M", "N", "m", "n", "P_p", "rho_p", "P_s", "rho_s", "gamma",
    "tolerances", "primary_mode", "secondary_mode",
}
EXPERIMENT_KEYS = {"trials", "seed", "n_grid", "workers", "gamma_schedule", "q"}

COMMAND_MODES = {
    "mac-sweep": SecondaryMode.MAC,
    "bc-sweep": SecondaryMode.BROADCAST,
}


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers: {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers: {text!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="flat key=value scenario file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per grid point")
    parser.add_argument("--n-grid", dest="n_grid", type=_int_list, metavar="LIST")
    parser.add_argument("--workers", type=int, help="worker processes (default UNDERLAY_WORKERS)")
    parser.add_argument("--scenario", choices=sorted(SCENARIOS))
    parser.add_argument("--out", metavar="PATH", help="CSV destination (default stdout)")
    parser.add_argument("--bits", action="store_true", help="report rates in bits")
    parser.add_argument("--tolerances", type=_float_list, metavar="LIST",
                        help="per-constraint interference tolerances")

    gamma = parser.add_mutually_exclusive_group()
    gamma.add_argument("--gamma", type=float, metavar="G")
    gamma.add_argument("--gamma-power-law", dest="gamma_power_law", type=float,
                       nargs=2, metavar=("G", "Q"), help="Γ(n) = G n^-q")
    gamma.add_argument("--gamma-log-law", dest="gamma_log_law", type=float,
                       nargs=2, metavar=("G", "Q"), help="Γ(n) = G (log n)^-q")

    system = parser.add_argument_group("system parameters")
    system.add_argument("--m", dest="m", type=int, help="secondary antennas")
    system.add_argument("--M", dest="M", type=int, help="primary antennas")
    system.add_argument("--N", dest="N", type=int, help="primary users")
    system.add_argument("--P-p", dest="P_p", type=float, help="primary broadcast power")
    system.add_argument("--rho-p", dest="rho_p", type=float, help="primary MAC per-user power")
    system.add_argument("--P-s", dest="P_s", type=float, help="secondary broadcast power")
    system.add_argument("--rho-s", dest="rho_s", type=float, help="secondary MAC per-user power")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="underlaysim",
        description="Monte Carlo throughput and bounds for underlay cognitive radio",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    mac = commands.add_parser("mac-sweep", help="secondary MAC throughput versus n")
    _add_common(mac)
    bc = commands.add_parser("bc-sweep", help="secondary broadcast throughput versus n")
    _add_common(bc)
    validate = commands.add_parser("validate", help="run the validation checks")
    _add_common(validate)
    validate.add_argument("--check", dest="checks", action="append", choices=sorted(CHECKS),
                          default=[], help="run only this check (repeatable)")
    bounds = commands.add_parser("bounds", help="closed-form bounds without simulation")
    _add_common(bounds)
    return parser


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def load_config_file(path: str) -> Dict[str, object]:
    """Read a key=value scenario file into typed values; unknown keys are rejected"""
    if not os.path.isfile(path):
        raise ConfigurationError(f"config file not found: {path}")
    raw = dotenv_values(path)
    unknown = sorted(set(raw) - SYSTEM_KEYS - EXPERIMENT_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")

    values: Dict[str, object] = {}
    try:
        for key, text in raw.items():
            if text is None:
                raise ConfigurationError(f"config key {key} has no value")
            if key in ("M", "N", "m", "n", "trials", "seed", "workers"):
                values[key] = int(text)
            elif key in ("P_p", "rho_p", "P_s", "rho_s", "gamma", "q"):
                values[key] = float(text)
            elif key == "tolerances":
                values[key] = [float(item) for item in _split(text)]
            elif key == "n_grid":
                values[key] = [int(item) for item in _split(text)]
            else:
                values[key] = text.strip()
    except ValueError as e:
        raise ConfigurationError(f"malformed value in {path}: {e}")
    if "n" in values and "n_grid" in values:
        raise ConfigurationError(f"{path} sets both n and n_grid; use one")
    return values


def _resolve_scenario(command: str, requested: Optional[str], values: Dict[str, object]):
    if requested is not None:
        secondary, primary = SCENARIOS[requested]
    else:
        try:
            primary = PrimaryMode(values.get("primary_mode", PrimaryMode.BROADCAST))
            secondary = SecondaryMode(
                values.get("secondary_mode", COMMAND_MODES.get(command, SecondaryMode.MAC))
            )
        except ValueError as e:
            raise ConfigurationError(str(e))

    expected = COMMAND_MODES.get(command)
    if expected is not None and secondary != expected:
        raise ConfigurationError(
            f"{command} needs a secondary {expected.value}, got scenario "
            f"{requested or secondary.value}"
        )
    return secondary, primary


def _gamma_schedule(args: argparse.Namespace, values: Dict[str, object]) -> GammaSchedule:
    if args.gamma is not None:
        return GammaSchedule(kind="constant", gamma0=args.gamma)
    if args.gamma_power_law is not None:
        gamma0, q = args.gamma_power_law
        return GammaSchedule(kind="power_law", gamma0=gamma0, q=q)
    if args.gamma_log_law is not None:
        gamma0, q = args.gamma_log_law
        return GammaSchedule(kind="log_law", gamma0=gamma0, q=q)
    return GammaSchedule(
        kind=values.get("gamma_schedule", "constant"),
        gamma0=values.get("gamma", SystemConfig.model_fields["gamma"].default),
        q=values.get("q", 0.0),
    )


def _check_exponent(schedule: GammaSchedule, cfg: SystemConfig) -> None:
    if schedule.kind == "power_law":
        limit = cfg.m / cfg.constraint_count
        if not 0 < schedule.q < limit:
            raise ConfigurationError(
                f"power-law exponent q={schedule.q} must lie in (0, m/K) = (0, {limit:g})"
            )
    elif schedule.kind == "log_law" and not 0 < schedule.q < 1:
        raise ConfigurationError(f"log-law exponent q={schedule.q} must lie in (0, 1)")


def _file_grid(values: Dict[str, object]) -> List[int]:
    # a single n in the file is a one-point grid
    if "n" in values:
        return [values["n"]]
    return DEFAULT_N_GRID


def _pick(flag, values: Dict[str, object], key: str, default):
    if flag is not None:
        return flag
    return values.get(key, default)


def build_cli_config(argv: Optional[Sequence[str]] = None) -> CliConfig:
    """Parse argv, merge the layers and validate the result"""
    args = build_parser().parse_args(argv)
    values = load_config_file(args.config) if args.config else {}

    try:
        secondary, primary = _resolve_scenario(args.command, args.scenario, values)
        schedule = _gamma_schedule(args, values)

        system = {
            key: values[key]
            for key in SYSTEM_KEYS - {"primary_mode", "secondary_mode"}
            if key in values
        }
        for key in ("M", "N", "m", "P_p", "rho_p", "P_s", "rho_s", "tolerances"):
            flag = getattr(args, key)
            if flag is not None:
                system[key] = flag
        system["gamma"] = schedule.gamma0
        system["primary_mode"] = primary
        system["secondary_mode"] = secondary
        cfg = SystemConfig(**system)
        _check_exponent(schedule, cfg)

        trials = _pick(args.trials, values, "trials", DEFAULT_TRIALS)
        if trials < 2:
            raise ConfigurationError("at least 2 trials are needed for a standard error")

        experiment = ExperimentSpec(
            cfg=cfg,
            n_grid=_pick(args.n_grid, values, "n_grid", _file_grid(values)),
            trials=trials,
            seed=_pick(args.seed, values, "seed", settings.DEFAULT_SEED),
            gamma_schedule=schedule,
            workers=_pick(args.workers, values, "workers", settings.DEFAULT_WORKERS),
        )
        return CliConfig(
            command=args.command,
            experiment=experiment,
            out=args.out,
            bits=args.bits,
            checks=getattr(args, "checks", []),
            check_trials=args.trials,
        )
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigurationError(f"invalid configuration: {problems}")
