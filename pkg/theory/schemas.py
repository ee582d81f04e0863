"""
Theory schemas for UnderlaySim
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict


class BoundsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    leading: float
    regime_ok: bool
    dropped_terms: str


class AsymptoticSeq(BaseModel):
    """Centering/scaling sequences for the maxima of L and U, given 𝒫 = ρ"""

    model_config = ConfigDict(frozen=True)

    b_n: float
    d_n: float
    a_n: float
    c_n: float
    rho: float
    m: int
    M: int


class TheoryConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    euler_gamma: float
    R_I: float
    mu1: float
    mu2: Optional[float] = None
    mu3: float
    mu4: Optional[float] = None
