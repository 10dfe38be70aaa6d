"""
Collatz transformation over GF(2)[x]

From an odd A the next even term is 1 + M1*A with M1 = x^2+x+1; it is always
divisible by both x and x+1, and stripping those factors gives the next odd
term. Every trajectory reaches 1, after which the map is stationary at
x^2+x -> 1.
"""
import json
import logging
from typing import List, Optional, Tuple

from app.config import settings
from app.exceptions import (
    InvariantViolationError,
    NotOddError,
    StepCapExceededError,
    ZeroPolynomialError,
)
from app.models.collatz_models import LENGTH_CONVENTION, CollatzTrace, OddDecomposition, StepResult
from app.services.gf2poly import Poly, _degree, _odd_part, bar

logger = logging.getLogger(__name__)


def next_even(a1: int) -> int:
    """1 + M1*a1 on integer masks"""
    return 1 ^ a1 ^ (a1 << 1) ^ (a1 << 2)


def next_odd(a1: int) -> Tuple[int, int, int, int]:
    """(even, a, b, next odd) for an odd integer-encoded polynomial"""
    even = next_even(a1)
    a, b, core = _odd_part(even)
    return even, a, b, core


class RepeatGuard:
    """
    Odd terms of the current equal-degree run. Odd degrees never increase along
    a trajectory, so a repeated term can only fall inside one run and the set is
    cleared whenever the degree drops.
    """

    def __init__(self, first: int):
        self.degree = _degree(first)
        self.terms = {first}
        self.peak = 1

    def admit(self, term: int) -> None:
        degree = _degree(term)
        if degree < self.degree:
            self.degree = degree
            self.terms.clear()
        elif term in self.terms:
            raise InvariantViolationError(f"odd term {Poly(term)} repeats before reaching 1")
        self.terms.add(term)
        self.peak = max(self.peak, len(self.terms))


def default_step_cap(degree: int, clamp: int) -> int:
    """2^(d-1) + 1 odd terms, d = max(1, min(degree, 30)), clamped"""
    d = max(1, min(degree, 30))
    return min((1 << (d - 1)) + 1, clamp)


class CollatzService:
    """
    Builds and checks Collatz traces

    Every trace is verified against the structural facts of the map while it is
    generated: both valuations of every even term are at least 1, degrees of the
    odd terms never increase, deg(A_{2k}) = deg(A_{2k-1}) + 2 =
    deg(A_{2k+1}) + a_{2k} + b_{2k}, no odd term repeats before 1, and the
    number of odd terms respects the exponential bound.
    """

    def __init__(self):
        self.max_stored_bits = settings.trace.max_stored_bits
        self.step_cap_clamp = settings.trace.step_cap_clamp

    def odd_part(self, p: Poly) -> OddDecomposition:
        if not p:
            raise ZeroPolynomialError("odd_part")
        a, b, core = _odd_part(p.bits)
        return OddDecomposition(a=a, b=b, core=Poly(core))

    def step(self, a1: Poly) -> StepResult:
        if not a1 or not a1.is_odd():
            raise NotOddError(f"step needs an odd polynomial, got {a1}")
        even, a, b, nxt = next_odd(a1.bits)
        if a < 1 or b < 1:
            raise InvariantViolationError(f"valuations ({a}, {b}) of 1+M1*({a1}) must both be >= 1")
        return StepResult(even=Poly(even), a=a, b=b, next_odd=Poly(nxt))

    def trace(self, seed: Poly, step_cap: Optional[int] = None) -> CollatzTrace:
        if not seed:
            raise ZeroPolynomialError("trace")
        degree = seed.degree
        if step_cap is None:
            step_cap = default_step_cap(degree, self.step_cap_clamp)
        a0, b0, core = _odd_part(seed.bits)

        odd_terms: List[int] = [core]
        even_terms: List[int] = []
        valuations: List[Tuple[int, int]] = []
        odd_degrees: List[int] = [_degree(core)]
        even_degrees: List[int] = []
        guard = RepeatGuard(core)
        stored_bits = core.bit_length()
        retained = True

        current = core
        while True:
            even, a, b, nxt = next_odd(current)
            self._check_link(current, even, a, b, nxt)
            valuations.append((a, b))
            even_degrees.append(_degree(even))
            if retained:
                even_terms.append(even)
                stored_bits += even.bit_length()
            if current == 1:
                break
            if len(odd_degrees) >= step_cap:
                raise StepCapExceededError(
                    f"trajectory of {seed} exceeded {step_cap} odd terms",
                    partial=self._build(seed, (a0, b0), odd_terms, even_terms, valuations,
                                        odd_degrees, even_degrees, retained, check=False),
                )
            guard.admit(nxt)
            odd_degrees.append(_degree(nxt))
            if retained:
                odd_terms.append(nxt)
                stored_bits += nxt.bit_length()
                if stored_bits > self.max_stored_bits:
                    logger.info(f"Trace of degree-{degree} seed exceeds {self.max_stored_bits} bits, keeping degrees only")
                    retained = False
                    odd_terms, even_terms = [], []
            current = nxt

        return self._build(seed, (a0, b0), odd_terms, even_terms, valuations,
                           odd_degrees, even_degrees, retained, check=True)

    def odd_degree_sequence(self, seed: Poly) -> List[int]:
        return self.trace(seed).odd_degrees

    def stationary_tail(self, steps: int) -> List[StepResult]:
        """Apply the step to the terminal odd term 1 repeatedly"""
        results = []
        current = Poly(1)
        for _ in range(steps):
            result = self.step(current)
            results.append(result)
            current = result.next_odd
        return results

    def bar_trace(self, trace: CollatzTrace) -> CollatzTrace:
        """Element-wise conjugation x -> x+1 of a trace, valuations swapped"""
        return CollatzTrace.model_construct(
            seed=bar(trace.seed),
            seed_decomposition=(trace.seed_decomposition[1], trace.seed_decomposition[0]),
            odd_terms=[bar(p) for p in trace.odd_terms],
            even_terms=[bar(p) for p in trace.even_terms],
            valuations=[(b, a) for a, b in trace.valuations],
            m=trace.m,
            r_A=trace.r_A,
            odd_degrees=list(trace.odd_degrees),
            even_degrees=list(trace.even_degrees),
            terms_retained=trace.terms_retained,
            convention=trace.convention,
        )

    # -- serialization ---------------------------------------------------

    def to_text_record(self, trace: CollatzTrace) -> str:
        lines = [
            f"seed {trace.seed.to_hex()} {trace.seed}",
            f"seed_decomposition {trace.seed_decomposition[0]} {trace.seed_decomposition[1]}",
            f"m {trace.m}",
            f"r_A {trace.r_A}",
            f"odd_degrees {trace.odd_degrees}",
            f"even_degrees {trace.even_degrees}",
            "valuations " + " ".join(f"{a},{b}" for a, b in trace.valuations),
        ]
        if trace.terms_retained:
            lines.append("odd_terms " + " ".join(p.to_hex() for p in trace.odd_terms))
            lines.append("even_terms " + " ".join(p.to_hex() for p in trace.even_terms))
        return "\n".join(lines) + "\n"

    def to_json(self, trace: CollatzTrace) -> str:
        return json.dumps(trace.model_dump(mode="json"), sort_keys=True) + "\n"

    # -- internals -------------------------------------------------------

    @staticmethod
    def _check_link(current: int, even: int, a: int, b: int, nxt: int) -> None:
        if a < 1 or b < 1:
            raise InvariantViolationError(f"valuations ({a}, {b}) of 1+M1*{Poly(current)} must both be >= 1")
        d_even, d_odd = _degree(even), _degree(current)
        if d_even != d_odd + 2 or d_even != _degree(nxt) + a + b:
            raise InvariantViolationError(f"degree links broken at {Poly(current)}")
        if _degree(nxt) == d_odd and (a, b) != (1, 1):
            raise InvariantViolationError(f"degree-preserving step at {Poly(current)} used valuations ({a}, {b})")

    def _build(self, seed, decomposition, odd_terms, even_terms, valuations,
               odd_degrees, even_degrees, retained, check: bool) -> CollatzTrace:
        m = len(odd_degrees)
        if check:
            self._check_bound(seed, m)
            if odd_degrees[-1] != 0 or valuations[-1] != (1, 1):
                raise InvariantViolationError(f"trace of {seed} does not end at 1 / x^2+x")
        return CollatzTrace.model_construct(
            seed=seed,
            seed_decomposition=decomposition,
            odd_terms=[Poly(v) for v in odd_terms] if retained else [],
            even_terms=[Poly(v) for v in even_terms] if retained else [],
            valuations=valuations,
            m=m,
            r_A=m + 1,
            odd_degrees=odd_degrees,
            even_degrees=even_degrees,
            terms_retained=retained,
            convention=LENGTH_CONVENTION,
        )

    @staticmethod
    def _check_bound(seed: Poly, m: int) -> None:
        degree = seed.degree
        if degree < 1:
            return
        bound = 1 << (degree - 1)
        if m > bound or (degree >= 3 and m + 1 > bound):
            raise InvariantViolationError(f"trace of {seed} has m={m}, above the 2^(deg-1) bound")


# Create singleton instance
collatz_service = CollatzService()
