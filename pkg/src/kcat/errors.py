"""Exception types raised across the kcat package."""


class KCatError(Exception):
    """Base class for every error raised by kcat."""


class TypeMismatch(KCatError):
    """Two 2-cells cannot be composed because their boundary legs disagree."""


class ShapeMismatch(KCatError):
    """A 2-cell does not have the dom/cod a structure declares for it."""


class ScalarModeMismatch(KCatError):
    """Cells over different scalar fields were combined."""


class MissingInverse(KCatError):
    """A convolution inverse (Phi^-1, omega^-1, ...) is required but absent."""


class MissingEntry(KCatError):
    """A cocycle family lacks a cell for a pair or triple the check needs."""


class KindUnsupported(KCatError):
    """A distributive-law kind was requested that the given structures cannot carry."""


class ContextMismatch(KCatError):
    """Convolution elements live in different convolution algebras."""


class ParseError(KCatError):
    """A structure file could not be read; carries line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownRole(KCatError):
    """A structure file refers to an undeclared space, cell or role."""
