"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: validation problems exit 2, missing
data dependencies exit 3.
"""


class RelaylinkError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RelaylinkError, ValueError):
    """A scalar input is outside its physical domain (negative power, NaN angle, ...)."""


class ConfigurationError(RelaylinkError, ValueError):
    """Inputs are individually valid but inconsistent as a configuration."""


class DataCoverageError(RelaylinkError, LookupError):
    """A query fell outside the coverage of a data table; never extrapolated silently."""


class NumericError(RelaylinkError, RuntimeError):
    """A numerical routine failed to converge or bracket its target."""
