"""
Binary polynomial arithmetic

Polynomials over GF(2) are stored as nonnegative Python integers: bit k is the
coefficient of x^k. Addition is xor, multiplication is carry-less, and the two
valuations used by the Collatz map reduce to trailing-zero counts (the valuation
at x+1 after the substitution x -> x+1).

The underscore helpers work directly on integers and are what the hot loops in
the search service call; the Poly class wraps them for everything else.
"""
import re
from functools import lru_cache
from typing import Any, Optional, Tuple

from pydantic_core import core_schema

from app.exceptions import PolyDivisionByZeroError, PolyParseError, ZeroPolynomialError


# ---------------------------------------------------------------------------
# integer kernels
# ---------------------------------------------------------------------------

def _degree(a: int) -> int:
    return a.bit_length() - 1


def _tz(a: int) -> int:
    """Index of the lowest set bit of a nonzero integer"""
    return (a & -a).bit_length() - 1


def _clmul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    c = 0
    while b:
        low = b & -b
        c ^= a << (low.bit_length() - 1)
        b ^= low
    return c


def _divmod(a: int, b: int) -> Tuple[int, int]:
    if b == 0:
        raise PolyDivisionByZeroError()
    m = _degree(a)
    n = _degree(b)
    if m < n:
        return 0, a
    q = 0
    for shift in range(m - n, -1, -1):
        if (a >> (shift + n)) & 1:
            a ^= b << shift
            q |= 1 << shift
    return q, a


@lru_cache(maxsize=64)
def _bar_masks(width: int) -> Tuple[Tuple[int, int], ...]:
    # bits j with (j mod 2s) < s, for every s = 1, 2, 4, ... < width
    full = (1 << width) - 1
    masks = []
    s = 1
    while s < width:
        masks.append((s, full // ((1 << (2 * s)) - 1) * ((1 << s) - 1)))
        s <<= 1
    return tuple(masks)


def _bar(a: int) -> int:
    """a(x+1): coefficient j becomes the xor of all c_k with k a bitwise superset of j"""
    if a < 2:
        return a
    width = 1 << (a.bit_length() - 1).bit_length()
    for s, mask in _bar_masks(width):
        a ^= (a >> s) & mask
    return a


def _reverse(a: int) -> int:
    return int(bin(a)[:1:-1], 2)


def _odd_part(a: int) -> Tuple[int, int, int]:
    """(val_x, val_x1, core) of a nonzero integer-encoded polynomial"""
    va = _tz(a)
    a >>= va
    conj = _bar(a)
    vb = _tz(conj)
    return va, vb, _bar(conj >> vb)


@lru_cache(maxsize=64)
def _residue_masks(width: int) -> Tuple[int, int, int]:
    base = ((1 << (3 * ((width + 2) // 3))) - 1) // 7
    return base, base << 1, base << 2


def _mod_m1(a: int) -> int:
    """a mod (x^2+x+1), using x^3 = 1 in the quotient ring"""
    m0, m1, m2 = _residue_masks(a.bit_length())
    r = ((a & m0).bit_count() & 1) | (((a & m1).bit_count() & 1) << 1) | (((a & m2).bit_count() & 1) << 2)
    if r & 4:
        r ^= 0b111
    return r


# ---------------------------------------------------------------------------
# Poly value type
# ---------------------------------------------------------------------------

class Poly:
    """
    Immutable binary polynomial

    bit k of ``bits`` holds the coefficient of x^k. The degree of the zero
    polynomial is ``None``.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: int = 0):
        if not isinstance(bits, int) or isinstance(bits, bool) or bits < 0:
            raise ValueError(f"polynomial bit vector must be a nonnegative int, got {bits!r}")
        object.__setattr__(self, "_bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def degree(self) -> Optional[int]:
        return _degree(self._bits) if self._bits else None

    def eval0(self) -> int:
        return self._bits & 1

    def eval1(self) -> int:
        return self._bits.bit_count() & 1

    def is_odd(self) -> bool:
        """No linear factor: p(0) = p(1) = 1"""
        return self.eval0() == 1 and self.eval1() == 1

    def __add__(self, other: "Poly") -> "Poly":
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        return mul(self, other)

    def __pow__(self, exponent: int) -> "Poly":
        return power(self, exponent)

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        return div_rem(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return div_rem(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return div_rem(self, other)[1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Poly", self._bits))

    def __bool__(self) -> bool:
        return self._bits != 0

    def __int__(self) -> int:
        return self._bits

    def __index__(self) -> int:
        return self._bits

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly('{format_poly(self)}')"

    def __reduce__(self):
        return (Poly, (self._bits,))

    def to_hex(self) -> str:
        return to_hex(self)

    @classmethod
    def coerce(cls, value: Any) -> "Poly":
        """Accept a Poly, an integer mask, or polynomial text / hex text"""
        if isinstance(value, Poly):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return cls(value)
        if isinstance(value, str):
            return parse_poly(value)
        raise ValueError(f"cannot interpret {value!r} as a binary polynomial")

    @classmethod
    def __get_pydantic_core_schema__(cls, source: Any, handler: Any) -> core_schema.CoreSchema:
        return core_schema.no_info_plain_validator_function(
            cls.coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(to_hex),
        )

    @classmethod
    def __get_pydantic_json_schema__(cls, schema: Any, handler: Any) -> dict:
        return {"type": "string", "pattern": "^0x[0-9a-f]+$", "examples": ["0x7"]}


ZERO = Poly(0)
ONE = Poly(1)
X = Poly(0b10)
X_PLUS_1 = Poly(0b11)
M1 = Poly(0b111)
X2_PLUS_X = Poly(0b110)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def add(p: Poly, q: Poly) -> Poly:
    return Poly(p.bits ^ q.bits)


def mul(p: Poly, q: Poly) -> Poly:
    """Carry-less product"""
    return Poly(_clmul(p.bits, q.bits))


def power(p: Poly, exponent: int) -> Poly:
    if exponent < 0:
        raise ValueError("negative exponent")
    result, base = 1, p.bits
    while exponent:
        if exponent & 1:
            result = _clmul(result, base)
        exponent >>= 1
        if exponent:
            base = _clmul(base, base)
    return Poly(result)


def div_rem(p: Poly, d: Poly) -> Tuple[Poly, Poly]:
    """Quotient and remainder with p = q*d + r, deg r < deg d"""
    q, r = _divmod(p.bits, d.bits)
    return Poly(q), Poly(r)


def val_x(p: Poly) -> int:
    """Largest a with x^a dividing p"""
    if not p:
        raise ZeroPolynomialError("val_x")
    return _tz(p.bits)


def bar(p: Poly) -> Poly:
    """The substitution x -> x+1 (an involutive ring automorphism)"""
    return Poly(_bar(p.bits))


def val_x1(p: Poly) -> int:
    """Largest b with (x+1)^b dividing p, computed as val_x(bar(p))"""
    if not p:
        raise ZeroPolynomialError("val_x1")
    return _tz(_bar(p.bits))


def reciprocal(p: Poly) -> Poly:
    """x^deg(p) * p(1/x): reversal of the coefficient window [0, deg p]"""
    if not p:
        raise ZeroPolynomialError("reciprocal")
    return Poly(_reverse(p.bits))


def to_hex(p: Poly) -> str:
    return hex(p.bits)


def from_hex(text: str) -> Poly:
    raw = text.strip().lower()
    if not raw.startswith("0x") or len(raw) == 2:
        raise PolyParseError("hex mask must look like 0x...", text)
    # int(..., 16) alone would also take a sign, underscores and inner spaces
    if not _HEX_DIGITS.fullmatch(raw[2:]):
        raise PolyParseError("invalid hex digits", text)
    return Poly(int(raw[2:], 16))


def format_poly(p: Poly) -> str:
    """Sum of monomials in descending degree, e.g. 'x^5+x^2+1'; '0' for zero"""
    bits = p.bits
    if not bits:
        return "0"
    terms = []
    for k in range(_degree(bits), -1, -1):
        if (bits >> k) & 1:
            terms.append("1" if k == 0 else "x" if k == 1 else f"x^{k}")
    return "+".join(terms)


_MONOMIAL = re.compile(r"^(?:1|x|x\^(\d+))$")
_HEX_DIGITS = re.compile(r"[0-9a-f]+")


def parse_poly(text: str) -> Poly:
    """Parse 'x^5+x^2+1' (any term order), '0', or a hex mask '0x25'"""
    raw = "".join(text.split()).lower()
    if raw.startswith("0x"):
        return from_hex(raw)
    if raw == "0":
        return ZERO
    if not raw:
        raise PolyParseError("empty polynomial", text)
    bits = 0
    for token in raw.split("+"):
        match = _MONOMIAL.match(token)
        if not match:
            raise PolyParseError("malformed monomial", token)
        if token == "1":
            k = 0
        elif token == "x":
            k = 1
        else:
            k = int(match.group(1))
        if (bits >> k) & 1:
            raise PolyParseError("duplicate monomial", token)
        bits |= 1 << k
    return Poly(bits)
