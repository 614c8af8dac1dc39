"""Exception types raised across the package."""


class OrliczError(Exception):
    """Base class for all package errors."""


class BadParam(OrliczError, ValueError):
    pass


class NonConvexInput(OrliczError, ValueError):
    pass


class BracketOverflow(OrliczError, ArithmeticError):
    pass


class NoRoot(OrliczError, ArithmeticError):
    pass


class BandLimitExceeded(OrliczError, ValueError):
    pass


class BadExponent(OrliczError, ValueError):
    pass


class NonFiniteModular(OrliczError, ArithmeticError):
    pass


class HypothesisFailed(OrliczError):
    """A hypothesis of an inequality could not be witnessed numerically."""


class NoFit(OrliczError):
    pass


class UnknownSpec(OrliczError, KeyError):
    pass
