"""
Error types for the GF(2) Collatz toolkit

Every error raised on purpose by the library derives from Gf2CollatzError so the
CLI and the HTTP API can turn domain failures into exit code 1 / HTTP 400 while
letting genuine bugs surface as tracebacks.
"""
from typing import Any, Optional


class Gf2CollatzError(Exception):
    """Base class for all domain errors"""


class ZeroPolynomialError(Gf2CollatzError, ValueError):
    """An operation that needs a nonzero polynomial received 0"""

    def __init__(self, operation: str):
        super().__init__(f"zero polynomial: {operation} is undefined for 0")
        self.operation = operation


class PolyDivisionByZeroError(ZeroPolynomialError, ZeroDivisionError):
    """Division by the zero polynomial"""

    def __init__(self):
        super().__init__("division")


class PolyParseError(Gf2CollatzError, ValueError):
    """Malformed polynomial text"""

    def __init__(self, message: str, token: str):
        super().__init__(f"{message}: {token!r}")
        self.token = token


class NotOddError(Gf2CollatzError, ValueError):
    """A polynomial with a linear factor was given where an odd one is required"""


class DegreeMismatchError(Gf2CollatzError, ValueError):
    """A polynomial does not have the degree the operation was asked for"""


class ParameterRangeError(Gf2CollatzError, ValueError):
    """A numeric parameter lies outside the supported range"""


class InvariantViolationError(Gf2CollatzError, AssertionError):
    """A mathematical invariant failed at runtime; this signals a bug"""


class StepCapExceededError(Gf2CollatzError):
    """A trajectory ran past its step cap; the partial trace is attached"""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class CheckpointError(Gf2CollatzError):
    """A checkpoint file is unreadable or belongs to a different run"""


class SearchInterruptedError(Gf2CollatzError):
    """A search stopped early after flushing its checkpoint"""


class MatthewsConfigError(Gf2CollatzError, ValueError):
    """Invalid (K, D, residue system) configuration"""


class NonCoprimeError(MatthewsConfigError):
    """K and D share a factor"""


class IncompleteResidueSystemError(MatthewsConfigError):
    """The residue map does not cover exactly the residues modulo D"""


class ResidueCongruenceError(MatthewsConfigError):
    """Some R_r is not congruent to K*r modulo D"""


class InexactDivisionError(InvariantViolationError):
    """K*S + R was not divisible by D"""
