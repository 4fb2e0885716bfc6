"""Exception types shared across the package."""


class KnothetaError(Exception):
    """Base class for all package errors."""


class DiagramError(KnothetaError, ValueError):
    """A link diagram (or its text encoding) is malformed or inconsistent."""


class PolynomialError(KnothetaError, ArithmeticError):
    """An exact Laurent-polynomial operation has no answer in the ring."""


class CrossingLimitExceeded(KnothetaError):
    """The diagram has more crossings than an exponential engine accepts."""

    def __init__(self, n: int, limit: int):
        super().__init__(f"diagram has {n} crossings; limit is {limit}")
        self.n = n
        self.limit = limit
