"""Exception hierarchy shared by every module."""


class DHLabError(Exception):
    """Base class for all library errors."""


class RangeError(DHLabError, ValueError):
    pass


class CoverageError(DHLabError, ValueError):
    """A prime table does not cover the range a computation needs."""


class DomainError(DHLabError, ValueError):
    pass


class DegenerateParams(DHLabError, ValueError):
    """Arc parameters do not define a nonempty minor arc."""


class BandwidthError(DHLabError, ValueError):
    """Requested quadrature step would alias the integrand."""


class SignPatternError(DHLabError, ValueError):
    pass


class OverflowGuard(DHLabError, OverflowError):
    pass


class ScaleError(DHLabError, ValueError):
    pass


class PrecisionExhausted(DHLabError, ArithmeticError):
    """Continued-fraction digits can no longer be certified.

    ``convergents`` holds the certified prefix computed before the failure.
    """

    def __init__(self, message, convergents=()):
        super().__init__(message)
        self.convergents = list(convergents)
