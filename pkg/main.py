#!/usr/bin/env python3
"""
UnderlaySim - command-line entry point
Monte Carlo throughput and closed-form bounds for underlay cognitive radio

Example usage:
  python main.py mac-sweep --n-grid 1000,3000,10000 --out mac.csv
  python main.py bc-sweep --gamma-log-law 2 0.5
  python main.py validate --check interference --trials 10000
  python main.py bounds --scenario bc-mac
"""

import sys
from typing import Optional, Sequence

import structlog

from settings import configure_logging
from cli.commands import COMMANDS
from cli.config import build_cli_config
from core.exceptions import UnderlayError

log = structlog.get_logger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, validate and dispatch; returns the process exit code"""
    configure_logging()
    try:
        cli = build_cli_config(argv)
        log.info("command_start", command=cli.command, scenario=cli.scenario)
        return COMMANDS[cli.command](cli)
    except UnderlayError as e:
        print(f"❌ {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
