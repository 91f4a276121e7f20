"""Typed failure modes shared across the package."""


class ParameterError(ValueError):
    """An argument violates an operation's contract."""


class FeasibilityError(RuntimeError):
    """The requested computation exceeds an enumeration guard."""
