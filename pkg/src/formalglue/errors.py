"""Exception hierarchy shared by every module of the package."""


class FormalGlueError(Exception):
    """Base class for all errors raised by formalglue."""


class AmbientMismatch(FormalGlueError):
    pass


class ConstantTermPresent(FormalGlueError):
    pass


class DuplicateVariable(FormalGlueError):
    pass


class NotStandardBasis(FormalGlueError):
    pass


class IllDefinedMap(FormalGlueError):
    pass


class NonSurjectiveMap(FormalGlueError):
    pass


class TrivialFactor(FormalGlueError):
    pass


class TrivialGluing(FormalGlueError):
    pass


class ZeroIdeal(FormalGlueError):
    pass


class NoPresentation(FormalGlueError):
    pass


class TruncationMismatch(FormalGlueError):
    pass


class BadField(FormalGlueError):
    pass


class SessionError(FormalGlueError):
    """An input-document problem, optionally carrying a source location."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)


class ParseError(SessionError):
    pass


class UndefinedName(SessionError):
    pass
