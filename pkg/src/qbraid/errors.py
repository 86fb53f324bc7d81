"""Exception hierarchy for the exact-arithmetic layers and the CLI."""


class QBraidError(Exception):
    """Base class for all package errors."""


class FieldMismatch(QBraidError):
    """Binary operation on scalars from different field contexts."""


class DivisionByZero(QBraidError):
    """Exact division or inversion of a zero scalar."""


class CoercionError(QBraidError):
    """Requested field embedding does not exist."""


class ZeroSubstitution(QBraidError):
    """Evaluation of a Laurent object at q = 0."""


class PoleAtPoint(QBraidError):
    """Evaluation of a rational function at a zero of its denominator."""


class NonPolynomialQuotient(QBraidError):
    """Internal consistency failure: an exact polynomial division left a remainder."""


class DegreeCapExceeded(QBraidError):
    """Symbolic degree exceeded the configured safety cap."""


class ParseError(QBraidError):
    """Scalar-spec syntax error; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ZeroQ(QBraidError):
    """A q parameter evaluated to zero."""


class NonSquare(QBraidError):
    """Square-matrix operation on a rectangular matrix."""


class ShapeMismatch(QBraidError):
    """Non-conformable matrix shapes or index sets."""


class Singular(QBraidError):
    """Inversion of a singular matrix."""


class CondQViolated(QBraidError):
    """The diagonal parameter matrix fails its compatibility constraint."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class QFactorialZero(QBraidError):
    """A q-factorial denominator vanished at a concrete root of unity."""


class NotUnitUpperTriangular(QBraidError):
    """Operation requires a unit upper-triangular matrix."""


class NotStrictlyUpperTriangular(QBraidError):
    """Operation requires a strictly upper-triangular matrix."""


class UnsupportedDimension(QBraidError):
    """Normal-form matrices are only available for sizes 2..5."""


class ConstraintViolated(QBraidError):
    """A parameter relation required by a construction fails."""


class SingularDiagonal(QBraidError):
    """A diagonal factor that must be inverted has a zero entry."""


class NotAReduciblePoint(QBraidError):
    """Root-of-unity reducibility requested where (n)_q does not vanish."""


class AlphaDegenerate(QBraidError):
    """Eigenvector closed forms need alpha outside {0, 1}."""
