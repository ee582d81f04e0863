"""
Broadcast scheduler schemas for UnderlaySim
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BcSchedule:
    """Beams, total transmit power and the max-SINR winner of every beam"""

    beams: np.ndarray
    power: float
    winners: np.ndarray
    winning_sinr: np.ndarray

    def assignments(self):
        return [
            (j, int(user), float(value))
            for j, (user, value) in enumerate(zip(self.winners, self.winning_sinr))
        ]


@dataclass(frozen=True)
class SinrSandwich:
    L: float
    S: float
    U: float
    theta: float

    @property
    def ordered(self) -> bool:
        return self.L <= self.S <= self.U
