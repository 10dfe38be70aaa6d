"""
Collatz trace models

A trace records everything produced by iterating the map A -> 1 + M1*A
followed by removal of the x and x+1 factors, starting from one seed.
"""
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.services.gf2poly import Poly

LENGTH_CONVENTION = "odd-terms-through-first-1"


class OddDecomposition(BaseModel):
    """p = x^a * (x+1)^b * core with core odd"""
    model_config = ConfigDict(frozen=True)

    a: int = Field(..., ge=0, description="valuation at x")
    b: int = Field(..., ge=0, description="valuation at x+1")
    core: Poly


class StepResult(BaseModel):
    """One application of the map to an odd polynomial"""
    model_config = ConfigDict(frozen=True)

    even: Poly
    a: int
    b: int
    next_odd: Poly


class CollatzTrace(BaseModel):
    """
    Full trajectory of one seed

    odd_terms[k] is A_{2k+1} and even_terms[k] is A_{2k+2}; both lists have m
    entries, the last odd term is 1 and the last even term is x^2+x. When the
    stored polynomials would exceed the configured memory cap only the degree
    and valuation sequences are kept and ``terms_retained`` is False.
    """
    model_config = ConfigDict(frozen=True)

    seed: Poly
    seed_decomposition: Tuple[int, int] = Field(..., description="(a_0, b_0)")
    odd_terms: List[Poly] = Field(default_factory=list)
    even_terms: List[Poly] = Field(default_factory=list)
    valuations: List[Tuple[int, int]]
    m: int = Field(..., ge=1)
    r_A: int = Field(..., ge=2)
    odd_degrees: List[int]
    even_degrees: List[int]
    terms_retained: bool = True
    convention: str = LENGTH_CONVENTION
