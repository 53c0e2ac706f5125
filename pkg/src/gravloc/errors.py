"""Exception taxonomy shared by all modules.

Exit codes (used by the CLI): 2 config/validation, 3 physical-regime
violation, 4 numerical-accuracy failure, 5 output/I-O failure.
"""


class GravlocError(Exception):
    exit_code = 1


class ConfigError(GravlocError):
    """Bad user input: malformed config, unknown keys, out-of-range values."""

    exit_code = 2


class InvalidGeometryError(ConfigError):
    """Non-finite or out-of-range geometry parameters."""


class RegimeError(GravlocError):
    """Inputs outside the validity regime of the quadratic approximation."""

    exit_code = 3


class AccuracyError(GravlocError):
    """A numerical tolerance could not be met.

    ``achieved`` carries the best available estimate, if any.
    """

    exit_code = 4

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class OutputError(GravlocError):
    exit_code = 5


class RegimeWarning(UserWarning):
    """Inputs formally valid but straining an asymptotic assumption."""
