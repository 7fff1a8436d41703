class FrontendError(Exception):
    """Base class for errors raised while reading user input."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class ParseError(FrontendError):
    """Malformed input text."""


class SemanticError(FrontendError):
    """Well-formed input that refers to something that does not exist or
    is otherwise inconsistent."""


class UnknownNameError(SemanticError):
    pass
