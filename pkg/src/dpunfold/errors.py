"""Exception hierarchy shared by all modules."""


class UnfoldingError(Exception):
    """Base class for every error raised by dpunfold."""


class DimensionMismatch(UnfoldingError, ValueError):
    pass


class SymmetryViolation(UnfoldingError, ValueError):
    """A matrix does not belong to the symmetry class it was tagged with."""


class NonConvergence(UnfoldingError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DerivativeFailure(UnfoldingError, ArithmeticError):
    """Finite-difference derivative failed its step-halving self-check."""


class DegenerateDirection(UnfoldingError, ArithmeticError):
    """Both eigenvector ratio forms are 0/0 (parameter shift keeps the point diabolic)."""


class ClassMismatch(UnfoldingError, TypeError):
    pass


class NearZeroRec(UnfoldingError, ArithmeticError):
    pass


class NegativeD(UnfoldingError, ArithmeticError):
    """No real exceptional points: the perturbation is chirality dominated."""


class DegenerateD(UnfoldingError, ArithmeticError):
    pass


class SingularFrame(UnfoldingError, ArithmeticError):
    pass


class DegenerateLine(UnfoldingError, ArithmeticError):
    pass


class RealnessViolated(UnfoldingError, ValueError):
    pass


class DegenerateRing(UnfoldingError, ArithmeticError):
    pass


class OffPlane(UnfoldingError, ValueError):
    pass


class NotBiaxial(UnfoldingError, ValueError):
    pass


class ConfigError(UnfoldingError):
    """Configuration could not be read or failed validation."""
