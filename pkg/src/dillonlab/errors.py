class DillonError(Exception):
    """Base class for all library errors."""


class InvalidModulus(DillonError, ValueError):
    pass


class InvalidArguments(DillonError, ValueError):
    pass


class InvalidTable(DillonError, ValueError):
    pass


class InvalidBasis(DillonError, ValueError):
    pass


class InvalidAffine(DillonError, ValueError):
    pass


class PreconditionError(DillonError, ValueError):
    """Input does not satisfy a checker's structural requirement (e.g. not quadratic)."""


class StructuralMismatch(PreconditionError):
    """A structural fact assumed by a criterion failed on the given function."""


class SizeLimitError(DillonError):
    """The requested computation exceeds the configured size guard."""


class ParseError(DillonError, ValueError):
    pass
