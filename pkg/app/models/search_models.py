"""
Search result models

These are the values produced by the exhaustive f(n) and g(n) searches and the
reports derived from them. Polynomials serialize as hex masks (bit k = x^k).
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from app.models.collatz_models import LENGTH_CONVENTION
from app.services.gf2poly import Poly


class SearchRecord(BaseModel):
    """Result of one f(n) or g(n) search"""
    kind: str = Field(..., description="'f' or 'g'")
    n: int
    value: int
    witness: Poly = Field(..., description="smallest mask attaining the value")
    seeds_examined: int
    convention: str = LENGTH_CONVENTION
    wall_time: float = Field(0.0, description="seconds")
    published_value: Optional[int] = None


class ChainCensus(BaseModel):
    """All maximal within-degree chains of odd polynomials of degree n"""
    n: int
    chain_count: int
    max_chain_len: int
    length_histogram: Dict[int, int]
    witness_chain: List[Poly]
    self_conjugate_chains: int = Field(0, description="chains fixed by x -> x+1")
    conjugation_classes: int = Field(0, description="chains counted up to x -> x+1")


class PolyBoundRow(BaseModel):
    n: int
    mode: str = Field(..., description="'exhaustive' or 'sampled'")
    seeds_checked: int
    max_r_A: int
    witness: Poly
    bound: int
    violation: bool
    violating_cores: int = 0
    in_regime: bool = True


class PolyBoundReport(BaseModel):
    """r_A against n(n+1)/2 for every degree up to n_max"""
    n_max: int
    rows: List[PolyBoundRow]
    violations: int = Field(..., description="rows in the conjectured regime (n >= 2) above the bound")


class ChainCandidate(BaseModel):
    start: Poly
    chain_len: int
    m: int
    r_A: int


class TargetedChainCheck(BaseModel):
    """Trajectory lengths of chain starts with a prescribed within-degree chain length"""
    n: int
    chain_len: int
    target: int
    starts_scanned: int
    candidates: List[ChainCandidate]
    matches_m: bool
    matches_r_A: bool
