"""Exception types raised by artbg."""


class InvalidArgumentError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class UnsupportedShapeError(NotImplementedError):
    pass


class IncompatibleOperandsError(ValueError):
    """Raised when two farfield matrices do not share k, grids or convention."""


class NoPeaksError(ValueError):
    pass


class FarfieldFormatError(ValueError):
    """Malformed or inconsistent farfield file.

    ``lineno`` is the 1-based line where parsing failed (None when the
    problem is not tied to a line, e.g. a metadata mismatch).
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
