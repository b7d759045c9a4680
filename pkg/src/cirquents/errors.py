"""Exception hierarchy shared by all modules."""


class CirquentsError(Exception):
    """Base class for every error raised by this package."""


class ParseError(CirquentsError, ValueError):
    """Malformed surface syntax.  ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CirquentError(CirquentsError, ValueError):
    pass


class RuleError(CirquentsError, ValueError):
    """An inference rule was applied outside its preconditions."""


class ProofFormatError(CirquentsError, ValueError):
    pass


class ResourceError(CirquentsError, ValueError):
    pass


class CapExceeded(CirquentsError):
    """A configured search/enumeration cap would be exceeded."""


class EvaluationError(CirquentsError, ValueError):
    """A model or situation does not fit the object being evaluated."""


class UnsupportedError(CirquentsError, ValueError):
    """The input lies outside the fragment a procedure is defined for."""
