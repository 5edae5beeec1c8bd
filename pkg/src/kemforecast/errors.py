"""Exception taxonomy for kemforecast.

Every error raised by the library derives from ForecastError so callers can
catch library failures distinctly from programming errors. Loader errors are
further split so a missing file, a malformed row, and an empty result are
distinguishable.
"""

__all__ = [
    "ForecastError",
    "InvalidInputError",
    "InvalidConfigError",
    "DegenerateBandwidthError",
    "NearSingularSystemError",
    "DegenerateDenominatorError",
    "IntegrationBlowupError",
    "NonNumericRowError",
    "EmptySeriesError",
    "SelectionError",
]


class ForecastError(Exception):
    """Base class for all kemforecast errors."""


class InvalidInputError(ForecastError):
    """An argument violates an operation's precondition."""


class InvalidConfigError(ForecastError):
    """An evaluation or CLI configuration is internally inconsistent."""


class DegenerateBandwidthError(ForecastError):
    """The median-percentage heuristic produced a bandwidth <= 0."""


class NearSingularSystemError(ForecastError):
    """A fitted linear system carries no usable information (zero variance)."""


class DegenerateDenominatorError(ForecastError):
    """The fixed-point denominator fell below the configured floor."""


class IntegrationBlowupError(ForecastError):
    """A generator produced a non-finite state during integration."""


class NonNumericRowError(ForecastError):
    """A CSV row past the header block failed numeric parsing."""


class EmptySeriesError(ForecastError):
    """Loading or truncation produced a series with no values."""


class SelectionError(ForecastError):
    """Every hyperparameter grid point failed during inner evaluation."""
