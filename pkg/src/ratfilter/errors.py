"""Exception types raised by ratfilter.

Every error derives from ``RatFilterError`` so callers (and the CLI) can
separate domain failures from programming mistakes.
"""


class RatFilterError(Exception):
    """Base class for all domain errors."""


class InvalidFilter(RatFilterError, ValueError):
    """A filter violates its structural invariants."""


class SymmetryViolation(InvalidFilter):
    """A pole/coefficient set is not closed under conjugation and reflection."""

    def __init__(self, msg, distance=None):
        super().__init__(msg)
        self.distance = distance


class DuplicatePoles(InvalidFilter):
    pass


class RealPole(RatFilterError, ValueError):
    """A pole sits on the real axis, where the integrals diverge."""


class InvalidInterval(RatFilterError, ValueError):
    pass


class InvalidWeight(RatFilterError, ValueError):
    pass


class ZeroAtOrigin(InvalidWeight):
    """The weight piece containing t = 0 is zero, so it cannot be normalized."""


class DomainEscape(RatFilterError, ArithmeticError):
    """An iterate left the region where the parameterization is valid."""


class StepRejected(RatFilterError):
    """The line search could not find an acceptable step."""


class SingularReduced(RatFilterError, ArithmeticError):
    """The reduced Levenberg-Marquardt system is numerically singular."""


class ConstructionFailure(RatFilterError):
    pass


class DegenerateSpectrum(RatFilterError, ValueError):
    pass


class InsufficientSpectrum(RatFilterError, ValueError):
    pass


class ZeroDenominator(RatFilterError, ArithmeticError):
    pass


class EmptyInput(RatFilterError, ValueError):
    pass


class SolveFailure(RatFilterError, ArithmeticError):
    pass


class RankCollapse(RatFilterError, ArithmeticError):
    pass


class NotConverged(RatFilterError):
    """Subspace iteration hit its iteration cap; ``result`` holds the partial state."""

    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result
