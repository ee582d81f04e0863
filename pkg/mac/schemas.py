"""
MAC scheduler schemas for UnderlaySim
"""

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict


class QuotaDesign(BaseModel):
    """Designed active-user count, per-link quota and integer cap"""

    model_config = ConfigDict(frozen=True)

    k_bar: float
    alpha: float
    cap: int


@dataclass(frozen=True)
class MacSchedule:
    eligible: np.ndarray
    active: np.ndarray
    per_user_power: float

    @property
    def active_count(self) -> int:
        return int(self.active.size)
