"""Exception types raised by the obk library."""


class ObkError(Exception):
    pass


class OrderMismatchError(ObkError, ValueError):
    """Binary jet operation on operands with different truncation orders."""


class NotAUnitError(ObkError, ArithmeticError):
    """Jet whose u^0 coefficient is not a nonzero monomial."""


class BadConstantTermError(ObkError, ValueError):
    """log/exp argument with the wrong u^0 coefficient."""


class DimensionMismatchError(ObkError, ValueError):
    pass


class InvariantError(ObkError, ValueError):
    """A value violates the invariants of its type."""


class NotInvertibleOnOverlapError(InvariantError):
    """Matrix determinant is not a monomial, so not invertible on U∩V."""


class PreconditionError(ObkError, ValueError):
    pass


class TruncationTooSmallError(PreconditionError):
    pass


class InternalError(ObkError, RuntimeError):
    """A step that should be unreachable was reached."""


class ParseError(ObkError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
