"""Exception classes shared across the package."""


class ParameterError(ValueError):
    """An argument violates a documented precondition (bad range, bad name)."""


class DegenerateInputError(ValueError):
    """Input is structurally valid but statistically degenerate (zero variance,
    too few positive values, ...)."""


class NumericError(ArithmeticError):
    """A numeric quantity is non-finite or otherwise outside its domain."""
