"""Exception hierarchy shared by every module of the package."""


class DorextError(Exception):
    """Base class for all package errors."""


class DivisionByZero(DorextError, ZeroDivisionError):
    pass


class FieldMismatch(DorextError):
    pass


class RingMismatch(DorextError):
    pass


class InvalidPresentation(DorextError):
    """A ring presentation violates the rewriting invariants."""


class NonTerminating(DorextError):
    """Normalization exceeded its rewrite-step cap."""


class IterationCap(DorextError):
    """Extension arithmetic exceeded its recursion budget."""


class WellDefinednessFailure(DorextError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotApplicable(DorextError):
    pass


class SourceNotBuildable(DorextError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DecompositionMismatch(DorextError):
    pass


class PreconditionFailure(DorextError):
    pass


class PoolTooLarge(DorextError):
    pass


class UnknownFixture(DorextError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SpecError(DorextError):
    """Base for DSL failures; carries an optional source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class SpecSyntaxError(SpecError):
    pass


class ResolutionError(SpecError):
    pass


class ArityError(SpecError):
    pass
