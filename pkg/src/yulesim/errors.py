"""Exception types shared across the package."""


class YulesimError(Exception):
    """Base class for all package errors."""


class DomainError(YulesimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InconsistentExponentError(DomainError):
    """Exponent below 2 would imply a negative novelty rate; no valid nu exists."""


class InsufficientDataError(YulesimError):
    """Too few usable points or sites to perform a fit."""


class BoundaryFitError(YulesimError):
    """Likelihood maximized at the edge of the search bracket; fit unusable."""


class FormatError(YulesimError):
    """A file or stream does not match its declared format."""


class TraceFormatError(FormatError):
    """Trace lines do not match the declared format spec."""


class WindowError(YulesimError):
    """A bounded time window cannot be applied to the given records."""
