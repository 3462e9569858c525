"""Exception types shared across the package."""


class IcgpError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(IcgpError, ValueError):
    """Raised for arguments that violate a documented precondition.

    Covers bad shapes, non-finite entries, out-of-range parameters,
    non-positive kernels where positivity is required, mismatched or
    degenerate partitions, and non-positive variances.
    """


class NumericError(IcgpError, ArithmeticError):
    """Raised when a numerical routine fails (factorization, eigensolver)."""


class DataError(IcgpError, ValueError):
    """Raised for malformed or unusable external data (CSV ingestion)."""


class ConfigError(IcgpError, ValueError):
    """Raised for invalid experiment configurations."""
