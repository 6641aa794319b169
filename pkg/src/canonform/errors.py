"""Exception types shared across the package."""


class CanonError(Exception):
    """Base class for every error raised by canonform."""


class SignatureError(CanonError):
    """Malformed signature, or a reference to an undeclared name."""


class SortError(CanonError):
    """Term violates the sorting discipline of its signature."""


class PositionError(CanonError):
    """Position does not address a subterm."""


class ShapeError(CanonError):
    """Term is not shaped as required, e.g. not a comb of the declared orientation."""


class TheoryError(CanonError):
    """Unsupported attribute combination, shared theory symbols, or a bad rule."""


class OracleError(CanonError):
    """No exact interpretation is available for the requested theory."""


class ParseError(CanonError):
    """Syntax or name-resolution error with source position and a stable code."""

    def __init__(self, message: str, line: int, col: int, code: str = "syntax"):
        super().__init__(message)
        self.line = line
        self.col = col
        self.code = code

    def render(self) -> str:
        return f"{self.line}:{self.col}: error[{self.code}]: {self.args[0]}"
