"""Link engineering toolkit for two-leg deep-space relay architectures.

Covers RF and optical link budgets, transparent and regenerative relay
chains, pointing-loss and outage models, SCPPM coded modulation over a
Poisson channel, planetary visibility statistics, and optical-terminal
mass sizing.
"""

from relaylink.errors import (
    ConfigurationError,
    DataCoverageError,
    DomainError,
    NumericError,
    RelaylinkError,
)

__version__ = "0.1.0"

__all__ = [
    "RelaylinkError",
    "DomainError",
    "ConfigurationError",
    "DataCoverageError",
    "NumericError",
    "__version__",
]
