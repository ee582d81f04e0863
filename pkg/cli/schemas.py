"""
Command-line schemas for UnderlaySim
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from montecarlo.schemas import ExperimentSpec
from network.schemas import PrimaryMode, SecondaryMode

Command = Literal["mac-sweep", "bc-sweep", "validate", "bounds"]

SCENARIOS = {
    "mac-bc": (SecondaryMode.MAC, PrimaryMode.BROADCAST),
    "mac-mac": (SecondaryMode.MAC, PrimaryMode.MAC),
    "bc-bc": (SecondaryMode.BROADCAST, PrimaryMode.BROADCAST),
    "bc-mac": (SecondaryMode.BROADCAST, PrimaryMode.MAC),
}

SHORT_MODE = {SecondaryMode.MAC: "mac", SecondaryMode.BROADCAST: "bc"}


def scenario_label(secondary: SecondaryMode, primary: PrimaryMode) -> str:
    return f"{SHORT_MODE[secondary]}-{SHORT_MODE[SecondaryMode(primary.value)]}"


class CliConfig(BaseModel):
    """Everything a subcommand needs, validated before anything runs"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    experiment: ExperimentSpec
    out: Optional[str] = None
    bits: bool = False
    checks: List[str] = []
    check_trials: Optional[int] = None

    @field_validator("check_trials")
    def validate_check_trials(cls, v):
        if v is not None and v < 2:
            raise ValueError("trials must be at least 2")
        return v

    @property
    def scenario(self) -> str:
        cfg = self.experiment.cfg
        return scenario_label(cfg.secondary_mode, cfg.primary_mode)
