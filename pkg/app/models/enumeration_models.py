"""
Polynomial strata: all polynomials of one degree sharing a constraint on
their values at 0 and 1.
"""
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class Constraint(str, Enum):
    ALL = "all"
    P0_ZERO = "p0=0"
    P0_ONE = "p0=1"
    P1_ZERO = "p1=0"
    P1_ONE = "p1=1"
    ODD = "odd"


QUADRANTS = (Constraint.P0_ZERO, Constraint.P0_ONE, Constraint.P1_ZERO, Constraint.P1_ONE)


class Stratum(BaseModel):
    """Polynomials of exact degree ``degree`` satisfying ``constraint``"""
    model_config = ConfigDict(frozen=True)

    degree: int = Field(..., ge=0)
    constraint: Constraint = Constraint.ALL


class MaskRange(BaseModel):
    """
    Half-open interval [lo, hi) of enumeration indices within a stratum

    For the odd stratum the index is the mask with bits 0, 1 and the leading bit
    dropped; for the other strata it is the mask with the leading bit dropped.
    """
    model_config = ConfigDict(frozen=True)

    stratum: Stratum
    lo: int = Field(..., ge=0)
    hi: int = Field(..., ge=0)
