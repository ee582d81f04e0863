"""
Experiment schemas for UnderlaySim
"""

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from bc.scheduler import gamma_log_law
from mac.scheduler import gamma_power_law
from network.schemas import PrimaryMode, SecondaryMode, SystemConfig
from theory.schemas import BoundsReport


class GammaSchedule(BaseModel):
    """Interference tolerance as a function of the user count"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant", "power_law", "log_law"] = "constant"
    gamma0: float = 2.0
    q: float = 0.0

    @field_validator("gamma0")
    def validate_gamma0(cls, v):
        if v <= 0:
            raise ValueError("Γ₀ must be positive")
        return v

    @field_validator("q")
    def validate_q(cls, v):
        if v < 0:
            raise ValueError("q must be non-negative")
        return v

    @model_validator(mode="after")
    def validate_log_law(self):
        if self.kind == "log_law" and self.q >= 1:
            raise ValueError("log-law exponent must satisfy q < 1")
        return self

    def value(self, n: int) -> float:
        if self.kind == "power_law":
            return gamma_power_law(self.gamma0, self.q, n)
        if self.kind == "log_law":
            return gamma_log_law(self.gamma0, self.q, n)
        return self.gamma0


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    cfg: SystemConfig
    n_grid: List[int]
    trials: int = 2000
    seed: int = 20091
    gamma_schedule: GammaSchedule = GammaSchedule()
    workers: int = 1

    @field_validator("n_grid")
    def validate_grid(cls, v):
        if not v:
            raise ValueError("n grid must not be empty")
        if any(n < 1 for n in v):
            raise ValueError("every grid point must be at least 1")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("n grid must be strictly increasing")
        return v

    @field_validator("trials")
    def validate_trials(cls, v):
        if v < 1:
            raise ValueError("trials must be at least 1")
        return v

    @field_validator("workers")
    def validate_workers(cls, v):
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v

    @property
    def scenario(self) -> tuple:
        return (self.cfg.secondary_mode, self.cfg.primary_mode)


class Estimate(BaseModel):
    """Sample mean of the throughput with its standard error (nats)"""

    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: float
    trials: int

    @field_validator("trials")
    def validate_trials(cls, v):
        if v < 2:
            raise ValueError("standard error is undefined for fewer than 2 trials")
        return v


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    gamma: float
    estimate: Estimate
    bounds: BoundsReport
    violations: int
    secondary_mode: SecondaryMode = SecondaryMode.MAC
    primary_mode: PrimaryMode = PrimaryMode.BROADCAST
