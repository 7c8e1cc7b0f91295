"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PadicError(Exception):
    """Base class for all errors raised by padic_dynamics."""


class NotPrime(PadicError, ValueError):
    pass


class DivisionByZero(PadicError, ZeroDivisionError):
    pass


class PrimeMismatch(PadicError, ValueError):
    pass


class ZeroHasNoExpansion(PadicError, ValueError):
    pass


class LiteralSyntaxError(PadicError, ValueError):
    pass


class OutsideConvergenceDomain(PadicError, ValueError):
    pass


class NotAUnit(PadicError, ValueError):
    pass


class NotARootModP(PadicError, ValueError):
    pass


class SingularRootModP(PadicError, ValueError):
    pass


class BudgetExceeded(PadicError, RuntimeError):
    pass


class UnresolvedMultipleRoot(PadicError, RuntimeError):
    """A residue class with f = f' = 0 mod p that the root engine could not certify.

    ``residues`` lists the offending classes as ``(center, valuation)`` pairs:
    the unresolved roots are congruent to ``center`` modulo ``p**valuation``.
    """

    def __init__(self, message: str, residues=()):
        super().__init__(message)
        self.residues = tuple(residues)


class HypothesisViolated(PadicError, ValueError):
    pass


class WrongResidueClassModThree(HypothesisViolated):
    pass


class SingularInput(PadicError, ValueError):
    pass


class WrongRegion(PadicError, ValueError):
    pass


class AtRepeller(PadicError, ValueError):
    pass


class CoverageUnreachable(PadicError, RuntimeError):
    def __init__(self, message: str, tag=None):
        super().__init__(message)
        self.tag = tag


class GuardViolated(PadicError, ValueError):
    pass


class DenominatorVanishes(PadicError, ArithmeticError):
    pass


class TheoremViolation(PadicError, AssertionError):
    """Raised when a computation contradicts a proved structural statement.

    Under the stated hypotheses this should never happen; it signals a bug or
    an input that slipped past validation.
    """
