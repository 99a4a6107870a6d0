# this_file: src/fraccalc/errors.py
"""Exception hierarchy shared by every fraccalc module."""


class FracCalcError(Exception):
    """Base class for all fraccalc errors."""


class DomainError(FracCalcError, ValueError):
    """A mathematical precondition of an operation is violated."""


class SpecError(FracCalcError, ValueError):
    """A function spec, JSON document or run configuration is malformed."""


class DivergenceError(DomainError):
    """A functional is infinite for the given input."""
