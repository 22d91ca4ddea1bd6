"""Exception hierarchy shared by all hypersing modules."""


class HypersingError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(HypersingError):
    """Evaluation requested at or too close to a pole of the gamma function."""


class DomainError(HypersingError):
    """Argument outside the mathematical domain of the operation."""


class ConvergenceError(HypersingError):
    """An adaptive quadrature or truncated expansion failed its tolerance."""


class ResolutionError(HypersingError):
    """Grid too coarse for a stable finite-difference or quadrature step."""


class TailModelError(HypersingError):
    """The fitted tail of a grid function is not decaying."""


class MethodDisagreement(HypersingError):
    """Two independent inversion methods disagree beyond tolerance."""


class NonConvergence(HypersingError):
    """Fixed-point iteration hit the iteration cap without converging."""


class BoundViolation(HypersingError):
    """A measured operator norm exceeded its analytic bound."""


class FitError(HypersingError):
    """A least-squares power-law fit had unacceptable residual."""


class ParadoxInconclusive(HypersingError):
    """The small-time exponent fit of the majorant pipeline is unreliable."""


class ConfigError(HypersingError):
    """Invalid run configuration; the message names the offending field."""
