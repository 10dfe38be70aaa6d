"""
Special polynomial families and conjecture verdicts
"""
from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field

from app.services.gf2poly import Poly


class FamilyKind(str, Enum):
    T = "T"          # x^n + x + 1
    U = "U"          # x^n + x^(n-1) + 1
    S = "S"          # x^n + x^7 + x^3 + 1
    MPOW = "MPOW"    # (x^2+x+1)^n + 1
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"


class FamilyId(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: FamilyKind
    n: int = Field(0, description="family parameter, ignored for P1-P3")


class Verdict(BaseModel):
    """Outcome of one conjecture instance"""
    family: str
    n: int
    parameter: str = Field("", description="extra parameters, e.g. 'r=4,j=7'")
    predicted: str
    observed: str
    holds: bool
    odd_degrees: List[int] = Field(default_factory=list)


class ConjectureReport(BaseModel):
    conjecture: str = Field(..., description="C2, C3 or C4")
    parameter_range: str
    verdicts: List[Verdict]

    @property
    def failures(self) -> List[Verdict]:
        return [v for v in self.verdicts if not v.holds]


class TableCheck(BaseModel):
    """One published degree-sequence row against the recomputed one"""
    family: str
    n: int
    polynomial: Poly
    expected: List[int]
    observed: List[int]
    match: bool


class ConjugationReport(BaseModel):
    seed: Poly
    bar_seed: Poly
    reciprocal_seed: Poly
    seed_degrees: List[int]
    bar_degrees: List[int]
    reciprocal_degrees: List[int]
    bar_equal: bool
    reciprocal_equal: bool


class MpowCore(BaseModel):
    n: int
    expected: Poly
    observed: Poly
    equal: bool
