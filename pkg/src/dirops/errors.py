class DomainError(ValueError):
    """An argument lies outside the region where the quantity is defined."""


class NonConvergenceError(RuntimeError):
    """An iteration cap or tail budget was exhausted."""


class NumericRangeError(ArithmeticError):
    """A computed norm left the representable window."""
