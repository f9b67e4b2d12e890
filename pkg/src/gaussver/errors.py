"""Exception types raised across the package."""


class GaussError(Exception):
    """Base class for all errors raised by gaussver."""


class DimensionMismatch(GaussError, ValueError):
    pass


class NotDivisible(GaussError, ValueError):
    pass


class NotSquare(GaussError, ValueError):
    pass


class ArithmeticOverflow(GaussError, OverflowError):
    """An intermediate value left the signed 64-bit range.

    Callers needing larger matrices must switch to arbitrary-precision
    arithmetic; this package does not do that silently.
    """


class InvalidDegree(GaussError, ValueError):
    pass


class OutOfProvenRange(GaussError, ValueError):
    pass


class TooManyParts(GaussError, ValueError):
    pass


class RankDeficient(GaussError, ValueError):
    pass


class DegreeMismatch(GaussError, ValueError):
    pass


class InvalidIndices(GaussError, ValueError):
    pass


class NoValidPair(GaussError, ValueError):
    pass


class TooLarge(GaussError, ValueError):
    pass


class MixedDegrees(GaussError, ValueError):
    pass


class EmptySet(GaussError, ValueError):
    pass
