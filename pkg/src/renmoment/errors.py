"""Exception hierarchy shared by all modules."""


class RenMomentError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(RenMomentError, ValueError):
    """Invalid distribution parameters or request fields."""


class NonFiniteError(ValidationError):
    """NaN or infinite component passed where a finite complex value is required."""


class PoleError(RenMomentError, ZeroDivisionError):
    """Function evaluated exactly at a pole.

    Attributes
    ----------
    pole : int or complex
        Location of the pole in the function's own argument.
    """

    def __init__(self, message, pole):
        super().__init__(message)
        self.pole = pole


class DomainError(RenMomentError, ValueError):
    """Argument outside the supported domain of a special function."""


class UnsupportedError(RenMomentError, NotImplementedError):
    """Combination of inputs that is deliberately not implemented."""


class AtPoleError(RenMomentError):
    """Closed-form moment requested exactly at a true pole in the order."""

    def __init__(self, message, pole, order=1):
        super().__init__(message)
        self.pole = pole
        self.order = order


class NotASingularityError(RenMomentError):
    """Finite part requested at a point where nothing needs removing."""


class HigherOrderPoleError(RenMomentError):
    """Finite-part extraction only handles simple poles."""


class OutsideStripError(RenMomentError):
    """Mellin integral requested outside its strip of convergence."""

    def __init__(self, message, strip):
        super().__init__(message)
        self.strip = strip


class ExpansionUnavailableError(RenMomentError):
    """No asymptotic expansion is known for the requested endpoint."""


class QuadratureError(RenMomentError):
    """Numerical integration did not reach the requested tolerance."""


class IllConditionedFitError(RenMomentError):
    """Least-squares design matrix is too ill-conditioned to trust."""

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


class GridTooSmallError(RenMomentError, ValueError):
    """Regulator grid has too few points or too narrow a span for the basis."""


class ContourPoleError(RenMomentError):
    """A singularity of m_z lies on or too close to the differentiation contour."""

    def __init__(self, message, pole):
        super().__init__(message)
        self.pole = pole
