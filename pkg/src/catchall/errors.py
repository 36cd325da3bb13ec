"""Exception hierarchy. Every error is a ``ValueError`` so callers can catch broadly."""


class CatchallError(ValueError):
    """Base class for all package errors."""


class ParameterError(CatchallError):
    """Invalid model parameters or configuration values."""


class HorizonTooLargeError(CatchallError):
    """Forecast horizon leaves fewer residual terms than required."""


class NonPositiveRatioError(CatchallError):
    """Sample lag-k/lag-0 moment ratio is <= 0, so its k-th root is undefined."""

    def __init__(self, k, ratio):
        self.k = k
        self.ratio = ratio
        super().__init__(
            f"moment ratio at horizon k={k} is {ratio!r} <= 0; "
            "the horizon is too long for this sample"
        )


class DegenerateSeriesError(CatchallError):
    """Series carries no variation (all zero / zero variance)."""


class SeriesTooShortError(CatchallError):
    """Series shorter than an operation requires."""


class SearchDomainError(CatchallError):
    """Empty or invalid scalar search interval."""


class DataFormatError(CatchallError):
    """Input file could not be parsed."""
