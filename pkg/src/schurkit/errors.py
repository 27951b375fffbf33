"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class SchurKitError(Exception):
    """Base class; ``code`` defaults to the class name."""

    @property
    def code(self) -> str:
        return type(self).__name__


class ParseError(SchurKitError, ValueError):
    pass


class UnknownCommand(SchurKitError, ValueError):
    pass


# algebra
class NonConvergence(SchurKitError, ArithmeticError):
    pass


class ZeroPolynomial(SchurKitError, ValueError):
    pass


# schur_function
class NotSchurPrefix(SchurKitError, ValueError):
    pass


class InconsistentBoundary(SchurKitError, ValueError):
    pass


class NonContractiveParameter(SchurKitError, ValueError):
    pass


class NotCoprime(SchurKitError, ValueError):
    pass


class RankDeficiency(SchurKitError, ValueError):
    pass


class DegenerateCayley(SchurKitError, ZeroDivisionError):
    pass


# hadamard
class NonPositiveWeight(SchurKitError, ValueError):
    pass


class ShapeMismatch(SchurKitError, ValueError):
    pass


class NotPSD(SchurKitError, ValueError):
    pass


class FactorizationMismatch(SchurKitError, ValueError):
    pass


class BadParameter(SchurKitError, ValueError):
    pass


# majorization
class LengthMismatch(SchurKitError, ValueError):
    pass


class NoPerfectMatching(SchurKitError, ValueError):
    pass


class NotMajorized(SchurKitError, ValueError):
    pass


class UnsupportedSize(SchurKitError, ValueError):
    pass


class NotSymmetric(SchurKitError, ValueError):
    pass


class NotHermitian(SchurKitError, ValueError):
    pass


# summability
class TruncationExceeded(SchurKitError, IndexError):
    pass


class SingularSection(SchurKitError, ArithmeticError):
    pass


# psido
class FloorTooHigh(SchurKitError, ValueError):
    pass


class NotMonic(SchurKitError, ValueError):
    pass


class DegreeNotDivisible(SchurKitError, ValueError):
    pass


class HypothesisViolated(SchurKitError, ValueError):
    pass


class IndexOverflow(SchurKitError, OverflowError):
    pass


# polya_schur
class BudgetExceeded(SchurKitError, ValueError):
    pass
