"""
Scenario schemas for UnderlaySim
"""

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class PrimaryMode(str, Enum):
    BROADCAST = "broadcast"
    MAC = "mac"


class SecondaryMode(str, Enum):
    MAC = "mac"
    BROADCAST = "broadcast"


class SystemConfig(BaseModel):
    """Full scenario description; powers are relative to unit noise variance"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    M: int = 2
    N: int = 2
    m: int = 4
    n: int = 1000
    P_p: float = 5.0
    rho_p: float = 5.0
    P_s: float = 5.0
    rho_s: float = 5.0
    gamma: float = 2.0
    tolerances: Optional[List[float]] = None
    primary_mode: PrimaryMode = PrimaryMode.BROADCAST
    secondary_mode: SecondaryMode = SecondaryMode.MAC

    @field_validator("M", "N", "m", "n")
    def validate_counts(cls, v):
        if v < 1:
            raise ValueError("antenna and user counts must be at least 1")
        return v

    @field_validator("P_p", "rho_p", "P_s", "rho_s", "gamma")
    def validate_positive(cls, v):
        if not np.isfinite(v) or v <= 0:
            raise ValueError("powers and interference tolerance must be positive")
        return v

    @model_validator(mode="after")
    def validate_tolerances(self):
        if self.tolerances is not None:
            if len(self.tolerances) != self.constraint_count:
                raise ValueError(
                    f"expected {self.constraint_count} tolerances, got {len(self.tolerances)}"
                )
            if any((not np.isfinite(t)) or t <= 0 for t in self.tolerances):
                raise ValueError("every tolerance must be positive")
        return self

    @property
    def constraint_count(self) -> int:
        """Number of interference constraints: primary users or primary antennas"""
        return self.N if self.primary_mode == PrimaryMode.BROADCAST else self.M

    @property
    def primary_streams(self) -> int:
        """Dimension of the primary transmit covariance"""
        return self.M if self.primary_mode == PrimaryMode.BROADCAST else self.N

    @property
    def primary_stream_power(self) -> float:
        """Diagonal entry of Q_p"""
        if self.primary_mode == PrimaryMode.BROADCAST:
            return self.P_p / self.M
        return self.rho_p

    @property
    def effective_gamma(self) -> float:
        """Tightest tolerance; the quota design uses it for every constraint"""
        if self.tolerances is None:
            return self.gamma
        return float(min(self.tolerances))

    def with_gamma(self, gamma: float) -> "SystemConfig":
        """Copy with a new Γ; explicit tolerances are rescaled by the same factor"""
        update = {"gamma": gamma}
        if self.tolerances is not None:
            factor = gamma / self.gamma
            update["tolerances"] = [t * factor for t in self.tolerances]
        return self.model_copy(update=update)

    def with_users(self, n: int) -> "SystemConfig":
        return self.model_copy(update={"n": n})


class PrimaryCovariance(BaseModel):
    """Q_p as a scaled identity"""

    model_config = ConfigDict(frozen=True)

    dim: int
    scale: float

    def matrix(self) -> np.ndarray:
        return self.scale * np.eye(self.dim)
