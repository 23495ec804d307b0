"""Exception hierarchy shared by all fracdyn modules."""

from __future__ import annotations


class FracdynError(Exception):
    """Base class for every error raised by the toolkit."""


# dimension algebra


class NonAffineExponent(FracdynError, ValueError):
    """A product of two order-dependent exponents was requested."""


# equation language


class DSLSyntaxError(FracdynError, SyntaxError):
    """Malformed equation source; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.msg = message
        self.line = line
        self.column = column
        self.lineno = line
        self.offset = column


class UndeclaredName(FracdynError, NameError):
    pass


class DuplicateDeclaration(FracdynError, ValueError):
    pass


class DimensionError(FracdynError, ValueError):
    """Base for dimension-inference failures."""

    term: str | None = None


class InhomogeneousSum(DimensionError):
    pass


class DimensionedTranscendentalArg(DimensionError):
    pass


class SignatureMismatch(DimensionError):
    """Argument of a declared function does not match its domain."""


# numerics


class PoleError(FracdynError, ValueError):
    pass


class NoConvergence(FracdynError, ArithmeticError):
    pass


class PrecisionLoss(FracdynError, ArithmeticError):
    """Series cancellation would exceed the requested tolerance."""


class OrderOutOfRange(FracdynError, ValueError):
    pass


class TooFewSamples(FracdynError, ValueError):
    pass


class NonFiniteValue(FracdynError, ArithmeticError):
    pass
