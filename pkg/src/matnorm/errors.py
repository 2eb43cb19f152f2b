"""Exception hierarchy shared across the package."""


class MatnormError(Exception):
    """Base class for all package errors."""


class DomainError(MatnormError, ValueError):
    """A parameter is outside its admissible range (exponents, shapes, reps, ...)."""


class BudgetExceededError(MatnormError):
    """An exact enumeration would exceed the configured budget."""


class ConfigError(MatnormError):
    """A campaign config or CLI input is malformed."""
