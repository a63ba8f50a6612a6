"""Exception hierarchy shared by every module of the package."""


class AlgdegError(Exception):
    """Base class for all errors raised by algdeg."""


class DomainError(AlgdegError, ValueError):
    """An input falls outside the domain of an operation."""


class NumericError(AlgdegError, ArithmeticError):
    """Numeric root refinement did not converge."""


class ConsistencyError(AlgdegError, RuntimeError):
    """An internal safety check failed."""


class DegenerateMapError(AlgdegError, ValueError):
    """All components of a map vanish identically."""


class IndeterminacyError(AlgdegError, ValueError):
    """A substitution made some denominator identically zero."""

    def __init__(self, message, iterate=None):
        super().__init__(message)
        self.iterate = iterate


class MapUndefinedError(AlgdegError, ValueError):
    """A map cannot be induced because the relevant element is never invertible."""


class ParseError(AlgdegError, ValueError):
    """Syntax error in one of the input languages."""

    def __init__(self, message, text="", position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.text = text
        self.position = position
