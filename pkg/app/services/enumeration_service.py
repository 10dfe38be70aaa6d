"""
Enumeration of polynomial strata and the counting lemma

Odd polynomials of degree d >= 2 have bits 0 and d set and an odd number of
set bits overall. The odd stratum is therefore enumerated from an index u over
bits 2..d-1 with bit 1 fixed by parity, a quarter of the raw mask space.
"""
import logging
from typing import Callable, Iterator, List

from app.exceptions import InvariantViolationError, ParameterRangeError
from app.models.enumeration_models import QUADRANTS, Constraint, MaskRange, Stratum
from app.services.gf2poly import Poly, _bar

logger = logging.getLogger(__name__)

_FILTERS: dict = {
    Constraint.ALL: lambda mask: True,
    Constraint.P0_ZERO: lambda mask: not mask & 1,
    Constraint.P0_ONE: lambda mask: bool(mask & 1),
    Constraint.P1_ZERO: lambda mask: not mask.bit_count() & 1,
    Constraint.P1_ONE: lambda mask: bool(mask.bit_count() & 1),
}


def odd_mask(degree: int, index: int) -> int:
    """The index-th odd polynomial of the given degree, ascending mask order"""
    if degree == 0:
        return 1
    bit1 = 1 ^ (index.bit_count() & 1)
    return (1 << degree) | (index << 2) | (bit1 << 1) | 1


def index_space(stratum: Stratum) -> int:
    """Number of enumeration indices of a stratum"""
    d = stratum.degree
    if stratum.constraint is Constraint.ODD:
        if d == 0:
            return 1
        if d == 1:
            return 0
        return 1 << (d - 2)
    if d == 0:
        return 1
    return 1 << d


def iter_masks(stratum: Stratum, lo: int = 0, hi: int = None) -> Iterator[int]:
    """Integer masks of the stratum for indices in [lo, hi), ascending"""
    size = index_space(stratum)
    hi = size if hi is None else min(hi, size)
    d = stratum.degree
    if stratum.constraint is Constraint.ODD:
        for index in range(lo, hi):
            yield odd_mask(d, index)
        return
    keep: Callable[[int], bool] = _FILTERS[stratum.constraint]
    top = 1 << d if d else 0
    for index in range(lo, hi):
        mask = top | index if d else 1
        if keep(mask):
            yield mask


def expected_count(stratum: Stratum) -> int:
    """Closed forms: 2^d for all, 2^(d-1) for a quadrant, 2^(d-2) odd (d >= 2)"""
    d = stratum.degree
    if stratum.constraint is Constraint.ALL:
        return 1 if d == 0 else 1 << d
    if stratum.constraint is Constraint.ODD:
        return index_space(stratum)
    return 1 << (d - 1)


class EnumerationService:
    """Iterates strata, counts them and checks the counting lemma"""

    def validate(self, stratum: Stratum) -> Stratum:
        if stratum.constraint in QUADRANTS and stratum.degree < 1:
            raise ParameterRangeError(f"stratum {stratum.constraint.value} needs degree >= 1")
        return stratum

    def iter(self, stratum: Stratum) -> Iterator[Poly]:
        self.validate(stratum)
        for mask in iter_masks(stratum):
            yield Poly(mask)

    def iter_range(self, mask_range: MaskRange) -> Iterator[Poly]:
        self.validate(mask_range.stratum)
        for mask in iter_masks(mask_range.stratum, mask_range.lo, mask_range.hi):
            yield Poly(mask)

    def count(self, stratum: Stratum) -> int:
        """Enumerated size of the stratum, cross-checked against its closed form"""
        self.validate(stratum)
        counted = sum(1 for _ in iter_masks(stratum))
        expected = expected_count(stratum)
        if counted != expected:
            raise InvariantViolationError(
                f"stratum degree {stratum.degree} {stratum.constraint.value}: enumerated {counted}, formula {expected}"
            )
        return counted

    def split(self, stratum: Stratum, parts: int) -> List[MaskRange]:
        """Disjoint index ranges covering the stratum, at most ``parts`` of them"""
        self.validate(stratum)
        size = index_space(stratum)
        parts = max(1, min(parts, size)) if size else 1
        ranges = []
        for k in range(parts):
            lo, hi = size * k // parts, size * (k + 1) // parts
            if hi > lo or size == 0:
                ranges.append(MaskRange(stratum=stratum, lo=lo, hi=hi))
        return ranges

    def shift_bijection_holds(self, degree: int) -> bool:
        """S -> S+1 maps the p(0)=0 stratum onto the p(0)=1 stratum"""
        zeros = iter_masks(Stratum(degree=degree, constraint=Constraint.P0_ZERO))
        ones = set(iter_masks(Stratum(degree=degree, constraint=Constraint.P0_ONE)))
        image = {mask ^ 1 for mask in zeros}
        return image == ones

    def conjugation_bijection_holds(self, degree: int) -> bool:
        """S -> S(x+1) maps the p(0)=0 stratum onto the p(1)=0 stratum"""
        zeros = iter_masks(Stratum(degree=degree, constraint=Constraint.P0_ZERO))
        targets = set(iter_masks(Stratum(degree=degree, constraint=Constraint.P1_ZERO)))
        image = {_bar(mask) for mask in zeros}
        return image == targets


# Create singleton instance
enumeration_service = EnumerationService()
