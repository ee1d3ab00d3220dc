"""Exceptions shared across the package.

Every failure mode that a caller can reasonably recover from gets its own
class; plain ValueError is reserved for programming errors (bad arguments
that the caller should never produce).
"""


class FormalConnError(Exception):
    """Base class for all package-specific errors."""


class TowerMismatchError(FormalConnError):
    """Two scalars (or series) live in incompatible extension towers.

    Only the rationals embed automatically into the other towers; mixing
    a cyclotomic tower with a quadratic one, or two cyclotomic towers of
    different conductor, is refused rather than silently coerced.
    """


class PrecisionError(FormalConnError):
    """A truncated series does not carry enough terms to decide the question."""


class NotFirstOrderError(FormalConnError):
    """The connection matrix has a pole of order >= 2 where a simple pole
    is required (residue extraction, monodromy classification)."""


class NotAnOperError(FormalConnError):
    """The connection is not in a Borel gauge transversal enough to be put
    into oper canonical form."""


class UnsupportedConnectionError(FormalConnError):
    """The operation is outside the documented scope (for example a Newton
    polygon whose leading branch cannot be certified after pullback)."""


class UnsupportedTypeError(FormalConnError):
    """Cartan type / rank combination outside the supported list."""
