"""Exception types shared across the package.

The CLI maps these onto process exit codes (config 2, data 3, degeneracy 4),
so raising the right class matters at every layer.
"""


class EegStrataError(Exception):
    """Base class for all package errors."""


class ConfigError(EegStrataError):
    """Invalid parameter, option, or precondition violation."""


class DataError(EegStrataError):
    """Missing, malformed, or inconsistent input data."""


class DegenerateDataError(EegStrataError):
    """Data is structurally valid but numerically degenerate
    (zero variance everywhere, a single class, ...)."""
