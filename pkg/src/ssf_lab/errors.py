"""Exception hierarchy shared by every module of the package."""


class SSFLabError(Exception):
    """Base class for all errors raised by ssf_lab."""


class SingularToTolerance(SSFLabError, ArithmeticError):
    pass


class NotHermitian(SSFLabError, ValueError):
    pass


class NotPSD(SSFLabError, ValueError):
    pass


class NotUnitary(SSFLabError, ValueError):
    pass


class NotContraction(SSFLabError, ValueError):
    pass


class NotDissipative(SSFLabError, ValueError):
    pass


class KernelAtMinusOne(SSFLabError, ArithmeticError):
    """I + T is singular, so the Cayley transform of T does not exist.

    Rotate the pair first (see :func:`ssf_lab.operators.rotate_pair`).
    """


class PoleAtInput(SSFLabError, ZeroDivisionError):
    pass


class ExhaustedAttempts(SSFLabError, RuntimeError):
    pass


class KernelNotPresent(SSFLabError, ValueError):
    pass


class ContourTooTight(SSFLabError, ValueError):
    pass


class InsufficientDecay(SSFLabError, ValueError):
    pass


class DimensionMismatch(SSFLabError, ValueError):
    pass


class StepTooSmall(SSFLabError, ValueError):
    pass


class WindingNonzero(SSFLabError, ArithmeticError):
    """The perturbation determinant winds around zero on the contour,
    or its argument cannot be tracked continuously on the sampled grid."""


class EigenvalueAtPlusMinusOne(SSFLabError, ValueError):
    pass


class OrderViolation(SSFLabError, ValueError):
    pass


class ConfigInvalid(SSFLabError, ValueError):
    pass


class ParseError(SSFLabError, ValueError):
    pass
