"""Exception types raised by the solver."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """An iterative method hit its iteration cap."""


class BracketError(ArithmeticError):
    """A root bracket did not show a sign change.

    For the secular equation this never happens for valid input and
    indicates a bug in the special-function kernel.
    """
