"""Exception hierarchy shared by every module."""


class ThreeLieError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(ThreeLieError, ValueError):
    pass


class NotInvertible(ThreeLieError, ArithmeticError):
    pass


class ContainmentViolation(ThreeLieError):
    """A claimed subspace is not contained in the ambient span."""


class ValidationFailure(ThreeLieError):
    """An input failed the checker its operation requires.

    ``report`` carries the failing :class:`~threelie.report.Report` when one
    is available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotNijenhuis(ValidationFailure):
    pass


class NotAdmissible(ValidationFailure):
    pass


class NotTrace(ValidationFailure):
    pass


class FormulaDisagreement(ThreeLieError):
    """The two routes to the twisted differential produced different values."""

    def __init__(self, message, key=None, generic=None, expanded=None):
        super().__init__(message)
        self.key = key
        self.generic = generic
        self.expanded = expanded


class TooLarge(ThreeLieError):
    pass


class ParseError(ThreeLieError, ValueError):
    pass


class UnresolvedReference(ThreeLieError, KeyError):
    pass
