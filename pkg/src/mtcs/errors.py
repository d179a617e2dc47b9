"""Exception hierarchy shared by all modules."""


class MtcsError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(MtcsError, ValueError):
    pass


class NotHermitian(MtcsError, ValueError):
    pass


class InvalidDensityMatrix(MtcsError, ValueError):
    pass


class TruncationError(MtcsError):
    """The Fock cutoff is too small for the requested state."""

    def __init__(self, message, tail=None, cutoff=None):
        super().__init__(message)
        self.tail = tail
        self.cutoff = cutoff


class ZeroMeanPhotonNumber(MtcsError, ZeroDivisionError):
    pass


class DegenerateState(MtcsError, ZeroDivisionError):
    pass


class GridTooSmall(MtcsError):
    pass


class SingularCovariance(MtcsError, ValueError):
    pass


class PurityOverflow(MtcsError, ValueError):
    pass


class NonPositiveFisher(MtcsError, ValueError):
    pass
