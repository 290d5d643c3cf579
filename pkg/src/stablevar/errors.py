"""Exception types shared across the package.

The CLI maps ValidationError to exit code 1 and NumericalError to exit
code 2.
"""


class StableVarError(Exception):
    """Base class for package errors."""


class ValidationError(StableVarError):
    """Invalid inputs: bad parameters, malformed files, too-short series."""


class NumericalError(StableVarError):
    """Numerical failure: singular or ill-conditioned systems, failed fits."""
