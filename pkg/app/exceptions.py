"""Error kinds raised by the services.

Services raise; only the CLI maps them to exit codes.
"""


class DecoyVerifyError(Exception):
    """Base class for every error the toolkit raises on purpose."""

    exit_code: int = 2


class InvalidPair(DecoyVerifyError, ValueError):
    """Intensities violate mu' > mu > 0 and mu' e^-mu' > mu e^-mu."""

    exit_code = 1


class ZeroRate(DecoyVerifyError):
    """A counting rate the bound divides by is zero."""


class NegativeBound(DecoyVerifyError):
    """The rates sit below the vacuum + single-photon floor."""


class NoSolution(DecoyVerifyError):
    """The fluctuation solve neither converged nor bracketed a root."""


class CountOverflow(DecoyVerifyError, OverflowError):
    """A pulse count does not fit the sampler's integer range."""


class NoData(DecoyVerifyError):
    """A simulated session produced nothing to bound."""


class ConfigError(DecoyVerifyError):
    """The run configuration is missing fields or holds invalid values."""

    exit_code = 1

    def __init__(self, message: str, field_paths: list[str] | None = None):
        super().__init__(message)
        self.field_paths = field_paths or []
