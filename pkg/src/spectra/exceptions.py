"""Exception hierarchy shared by every module.

Each class name matches the error token printed by the command-line tool,
so scripts can grep for it.
"""


class SpectraError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SpectraError, ValueError):
    """The caller passed something that violates a precondition."""


class ShapeMismatch(InputError):
    pass


class LengthMismatch(InputError):
    pass


class DomainError(InputError):
    pass


class NotNonnegative(InputError):
    pass


class NotIrreducible(InputError):
    pass


class NotConstantRowSums(InputError):
    pass


class NotAnEigenvalue(InputError):
    pass


class DefectivePair(InputError):
    """The requested eigenvalue pair is repeated or has no clean real plane."""


class DegeneratePair(InputError):
    """Imaginary part is zero, so there is no conjugate pair to shift."""


class CollinearEigenvectors(InputError):
    pass


class RankDeficientX(InputError):
    pass


class NotInvariant(InputError):
    pass


class ThresholdViolated(InputError):
    pass


class NotConvex(InputError):
    pass


class CollinearTriple(InputError):
    pass


class AllCollinear(InputError):
    pass


class NonConvergence(SpectraError, ArithmeticError):
    pass


class GenerationFailed(SpectraError, RuntimeError):
    pass


class PostconditionFailed(SpectraError, ArithmeticError):
    """Internal verification of a constructed matrix failed.

    Carries the measured margins so callers can tell a conditioning problem
    from a genuine bug.
    """

    def __init__(self, message, **margins):
        super().__init__(message)
        self.margins = margins
