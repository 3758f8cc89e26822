"""Domain errors raised by the algebra, presentation and integration layers."""

from __future__ import annotations

from typing import Any


class HopfError(RuntimeError):
    """Base class for every domain failure.

    ``witness`` carries the basis indices (or words) that exhibit the
    failure. ``exit_code`` is what the command line reports for it.
    """

    exit_code = 1

    def __init__(self, message: str, *, witness: tuple[Any, ...] = ()) -> None:
        super().__init__(message)
        self.witness = tuple(witness)

    @property
    def name(self) -> str:
        return type(self).__name__


class UsageError(HopfError):
    """Errors caused by the request rather than by the algebraic data."""

    exit_code = 2


# scalars


class DivisionByZero(HopfError, ZeroDivisionError):
    """Division by the zero rational function."""


class PoleAtPoint(HopfError):
    """The denominator vanishes at the requested evaluation point."""


# linear algebra and structure constants


class ShapeMismatch(HopfError):
    pass


class SingularMatrix(HopfError):
    pass


class AxiomViolation(HopfError):
    """A Hopf, braided or pairing axiom fails on some basis tuple."""

    def __init__(self, axiom: str, *, witness: tuple[Any, ...] = (), detail: str = "") -> None:
        message = f"axiom '{axiom}' violated"
        if witness:
            message += f" at {list(witness)}"
        if detail:
            message += f": {detail}"
        super().__init__(message, witness=witness)
        self.axiom = axiom


class AlgebraMismatch(HopfError):
    pass


class SingularAntipode(HopfError):
    pass


class AssociativityFailure(HopfError):
    pass


# integrals


class DegenerateImage(HopfError):
    def __init__(self, dim: int) -> None:
        super().__init__(f"modified trace image has dimension {dim}, expected 1", witness=(dim,))
        self.dim = dim


class DegenerateSolutionSpace(HopfError):
    def __init__(self, dim: int, what: str = "projector") -> None:
        super().__init__(f"{what} solution space has dimension {dim}, expected 1", witness=(dim,))
        self.dim = dim


class NilpotentCandidate(HopfError):
    pass


class AllZeroTheta(HopfError):
    pass


class ProportionalityFailure(HopfError):
    pass


# braided


class IdentityFailure(HopfError):
    pass


class ConsistencyFailure(HopfError):
    def __init__(self, check: str, detail: str = "") -> None:
        message = f"consistency check '{check}' failed"
        if detail:
            message += f": {detail}"
        super().__init__(message, witness=(check,))
        self.check = check


class ClosedFormMismatch(HopfError):
    def __init__(self, part: str, detail: str = "") -> None:
        message = f"closed form '{part}' does not match the solver"
        if detail:
            message += f": {detail}"
        super().__init__(message, witness=(part,))
        self.part = part


# presentation


class PresentationError(HopfError):
    pass


class PresentationSyntaxError(PresentationError, UsageError):
    def __init__(self, line: int, col: int, expected: str, found: str = "") -> None:
        message = f"line {line}, column {col}: expected {expected}"
        if found:
            message += f", found {found!r}"
        super().__init__(message, witness=(line, col))
        self.line = line
        self.col = col
        self.expected = expected


class DuplicateGenerator(PresentationError, UsageError):
    pass


class UnknownSymbol(PresentationError, UsageError):
    pass


class InvalidPresentation(PresentationError):
    pass


class NonTerminatingRewrite(PresentationError):
    def __init__(self, word: str, budget: int) -> None:
        shown = word if len(word) <= 80 else f"{word[:80]}... ({len(word)} characters)"
        super().__init__(f"rewriting '{shown}' exceeded the budget of {budget} steps", witness=(shown, budget))
        self.word = word
        self.budget = budget


class BasisEscape(PresentationError):
    def __init__(self, word: str) -> None:
        super().__init__(f"normal form '{word}' is not a declared basis word", witness=(word,))
        self.word = word


class NotPresentable(PresentationError):
    pass


class UnknownBuiltin(PresentationError, UsageError):
    pass


class BadParam(PresentationError, UsageError):
    pass


class MissingDualBlock(PresentationError, UsageError):
    """A command needs the dual pair of a presentation that declares none."""


class InputResolutionError(UsageError):
    pass
