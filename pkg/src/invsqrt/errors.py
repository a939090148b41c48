"""Exception hierarchy shared by all modules."""


class InvSqrtError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(InvSqrtError, ValueError):
    """An argument lies outside the supported physical or numerical domain."""


class PoleError(InvSqrtError, ZeroDivisionError):
    """Evaluation at a pole (1F1 with b in {0, -1, ...}, or a vanishing denominator)."""


class PrecisionError(InvSqrtError, ArithmeticError):
    """The error target could not be met, even in double-double arithmetic."""


class SingularRatioError(InvSqrtError, ZeroDivisionError):
    """The boundary-condition coefficient ratio has a vanishing denominator."""


class BracketError(InvSqrtError):
    """No sign change was found in the requested interval."""


class ConvergenceError(InvSqrtError):
    """An iteration stalled before reaching its tolerance."""


class GridError(InvSqrtError, ValueError):
    """A sampling grid is malformed or too coarse for the requested stencil."""


class ToleranceError(InvSqrtError):
    """Adaptive step control could not satisfy the local tolerance."""


class RangeError(InvSqrtError, ValueError):
    """Requested points lie outside the range covered by a trajectory."""
