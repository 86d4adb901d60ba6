"""Shared error types for guard rails around exact arithmetic and brute-force scans."""


class OverflowGuardError(ArithmeticError):
    """Magnitude precheck failed: a computation would leave the guaranteed exact range."""


class BudgetExceededError(RuntimeError):
    """A brute-force oracle refused to run because the scan would be too large."""
