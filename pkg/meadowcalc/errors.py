"""
Exception hierarchy for MeadowCalc.
Every domain error derives from MeadowCalcError so the session layer can
report it as a FAIL line without catching unrelated exceptions.
"""

from typing import Optional


class MeadowCalcError(Exception):
    """Base class for all domain errors."""


class UnboundVariableError(MeadowCalcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable '{name}'")


class UnknownAtomError(MeadowCalcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown atom '{name}'")


class SpaceMismatchError(MeadowCalcError):
    """Raised when values from different event spaces are combined."""


class InvalidSpaceError(MeadowCalcError):
    """Raised for empty or duplicate atom lists."""


class UnsupportedPatternError(MeadowCalcError):
    def __init__(self, subterm: str, reason: str = "unsupported indicator pattern"):
        self.subterm = subterm
        super().__init__(f"{reason}: {subterm}")


class VariableMismatchError(MeadowCalcError):
    """Raised when guard tables over different variable lists are combined."""


class InvalidIndexError(MeadowCalcError):
    """Raised for out-of-range or unordered variable indices."""


class InvalidDistributionError(MeadowCalcError):
    """Raised when weights or tensors are negative or do not sum to one."""


class DegenerateDenominatorError(MeadowCalcError):
    """Raised when a side condition requires a nonzero denominator."""


class InvalidThresholdError(MeadowCalcError):
    """Raised when low >= high in the asking scenario."""


class UnknownObjectError(MeadowCalcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"undeclared object '{name}'")


class MissingArityError(MeadowCalcError):
    def __init__(self, arity: tuple):
        self.arity = arity
        super().__init__(f"arity ({' '.join(arity)}) is not in the family")


class InvalidFamilyError(MeadowCalcError):
    """Raised when an arity family violates a closure condition."""


class SizeBoundExceededError(MeadowCalcError):
    def __init__(self, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(f"size {size} exceeds bound {bound}")


class ParseError(MeadowCalcError):
    def __init__(self, message: str, column: Optional[int] = None):
        self.column = column
        if column is not None:
            message = f"syntax error at column {column}: {message}"
        else:
            message = f"syntax error: {message}"
        super().__init__(message)


class UnknownCommandError(MeadowCalcError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"unknown command '{word}'")


class UnboundNameError(MeadowCalcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound name '{name}'")


class KindMismatchError(MeadowCalcError):
    def __init__(self, name: str, expected: str, actual: str):
        self.name = name
        super().__init__(f"'{name}' is a {actual}, expected a {expected}")


class RedefinitionError(MeadowCalcError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"'{name}' is already defined")
