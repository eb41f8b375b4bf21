"""Exception types shared across the package."""


class PreconditionViolation(ValueError):
    """A model precondition does not hold (bad parameters, wrong regime)."""


class EnumerationBudgetExceeded(RuntimeError):
    """Exact enumeration would be too large; use a Monte Carlo estimate."""
