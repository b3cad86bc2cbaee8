"""Exception types raised across etalab."""


class EtaLabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EtaLabError, ValueError):
    """Input outside the region where an operation is defined."""


class PoleAtOne(DomainError):
    pass


class NearPole(DomainError):
    pass


class CutViolation(DomainError):
    """A continuation path or shifted set meets a cut of the slit plane."""


class InvalidStep(DomainError):
    pass


class ZeroFrequency(DomainError):
    pass


class EmptySample(DomainError):
    pass


class GridMismatch(DomainError):
    pass


class BranchJump(EtaLabError, ArithmeticError):
    """log zeta jumped between adjacent samples even after step refinement."""


class ToleranceNotMet(EtaLabError, ArithmeticError):
    pass


class CatalogTooShort(EtaLabError, LookupError):
    """Requested window reaches above the height the zero table covers."""


class ParseError(EtaLabError, ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MonotonicityError(EtaLabError, ValueError):
    pass
