"""Exception types raised across the package."""


class NCDiracError(Exception):
    """Base class for all package errors."""


class PoleError(NCDiracError, ArithmeticError):
    """A Gamma function was evaluated at a non-positive integer."""


class DegenerateDenominator(NCDiracError, ArithmeticError):
    """A lower hypergeometric parameter produced a vanishing Pochhammer symbol."""


class NonFiniteResult(NCDiracError, OverflowError):
    """A special function overflowed or produced NaN."""


class DomainError(NCDiracError, ValueError):
    """An argument lies outside the domain of an operation."""


class GridTooCoarse(NCDiracError, ValueError):
    pass


class NoRoot(NCDiracError):
    """No sign change of the quantization residual was found.

    ``extrema`` holds the (min, max) of the scanned residual real part.
    """

    def __init__(self, message, extrema=None):
        super().__init__(message)
        self.extrema = extrema


class MultipleRoots(NCDiracError):
    """More than one root in the bracket; ``roots`` lists all of them."""

    def __init__(self, message, roots):
        super().__init__(message)
        self.roots = list(roots)


class NonNormalizable(NCDiracError):
    pass


class DivergentIntegral(NCDiracError, ValueError):
    pass


class QuadratureFailure(NCDiracError):
    pass


class ConvergenceFailure(NCDiracError):
    pass


class NoBoundState(NCDiracError):
    pass


class ConfigError(NCDiracError, ValueError):
    pass
