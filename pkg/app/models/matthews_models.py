"""
Generalized map T = (K_r*S - R_r) / D with r = S mod D

Over GF(2) the subtraction is an addition. K_r is the common multiplier K
unless a residue carries its own.
"""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.services.gf2poly import Poly


class MatthewsConfig(BaseModel):
    """
    A validated (K, D, residue system) triple

    ``residue_map`` maps every residue r (deg r < deg D) to R_r = K_r*r (mod D).
    ``multipliers`` holds the residues whose multiplier K_r differs from K, e.g.
    {0: 1} for a map that simply divides by D on multiples of D.
    Build instances through ``matthews_service.make_config``.
    """
    model_config = ConfigDict(frozen=True)

    K: Poly
    D: Poly
    residue_map: Dict[Poly, Poly]
    multipliers: Dict[Poly, Poly] = Field(default_factory=dict)

    def multiplier(self, r: Poly) -> Poly:
        return self.multipliers.get(r, self.K)


class OutcomeKind(str, Enum):
    CYCLE = "cycle"
    DEGREE_DIVERGENCE = "degree_divergence"
    STEP_EXHAUSTED = "step_exhausted"


class TrajectoryOutcome(BaseModel):
    """Classification of one trajectory of the map"""
    kind: OutcomeKind
    seed: Poly
    steps: int = Field(..., description="map applications performed")
    max_degree: Optional[int] = Field(None, description="None when every term is 0")
    cycle_entry: Optional[int] = Field(None, description="index of the first term on the cycle")
    cycle_length: Optional[int] = None
    cycle_members: List[Poly] = Field(default_factory=list)
    degree_threshold: Optional[int] = None
    divergence_step: Optional[int] = None
    prefix: List[Poly] = Field(default_factory=list, description="first terms, capped")
    degree_profile: List[Optional[int]] = Field(default_factory=list)
