"""The power-kernel convolution family and its algebra.

Kernels k_lam(t) = t_+**(lam-1)/Gamma(lam) form a convolution semigroup
(k_lam * k_mu = k_{lam+mu}) with the Dirac delta as the lam=0 element.
For -1 < lam < 0 the classically divergent convolution is realized in the
time domain as d/dt of the mollified convolution with k_{lam+1}, which has
the same Laplace image p**(-lam) * L(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleError, ResolutionError
from .grid import GridFunction
from .quadrature import SingularRule, singular_weights
from .special_functions import POLE_GUARD, gamma, reciprocal_gamma

MIN_HYPER_POINTS = 64  # coarser grids make the differentiation step unstable


@dataclass(frozen=True)
class Delta:
    """Marker for the lam = 0 kernel, the Dirac delta."""


@dataclass(frozen=True)
class PhiKernel:
    """The kernel t_+**(lam-1)/Gamma(lam) of order lam."""

    lam: float

    def __post_init__(self):
        if self.lam <= 0.5 and abs(self.lam - round(self.lam)) < POLE_GUARD and round(self.lam) <= 0:
            raise PoleError(f"kernel order lam={self.lam} sits on a pole; use Delta for lam=0")

    @property
    def c1(self) -> float:
        """|Gamma(-1/4)| = 4*Gamma(3/4), cached for the lam = -1/4 kernel."""
        return abs(gamma(-0.25))


def phi_eval(k: PhiKernel, t: float) -> float:
    """Pointwise kernel value t**(lam-1)/Gamma(lam); 0 for t <= 0 when lam >= 1."""
    if t <= 0:
        if k.lam < 1:
            raise DomainError(f"kernel of order {k.lam} is singular at t={t}")
        if k.lam == 1:
            return 0.0 if t < 0 else 1.0
        return 0.0
    return t ** (k.lam - 1.0) * reciprocal_gamma(k.lam)


@lru_cache(maxsize=16)
def _cached_rule(lam: float, grid_key: tuple) -> SingularRule:
    return singular_weights(lam, np.asarray(grid_key))


def _rule(lam: float, grid: np.ndarray) -> SingularRule:
    return _cached_rule(lam, tuple(grid.tolist()))


def conv_positive(k: PhiKernel, b: GridFunction) -> GridFunction:
    """Convolution k * b for lam > 0 by moment-exact product integration.

    The result vanishes at t = 0 for every bounded b.
    """
    if k.lam <= 0:
        raise DomainError(f"conv_positive needs lam > 0, got {k.lam}")
    rule = _rule(k.lam, b.grid)
    out = rule.apply(b.values) * reciprocal_gamma(k.lam)
    return b.with_values(out)


def conv_hyper(k: PhiKernel, b: GridFunction) -> GridFunction:
    """Hyper-singular convolution k * b for -1 < lam < 0.

    Realized as d/dt of the mollified convolution with the order-(lam+1)
    kernel: the Laplace image is p * p**(-(lam+1)) * L(b) = p**(-lam) * L(b),
    exactly the analytic continuation defining the divergent integral.
    The derivative uses second-order stencils (one-sided at the ends).
    """
    if not (-1.0 < k.lam < 0.0):
        raise DomainError(f"conv_hyper needs -1 < lam < 0, got {k.lam}")
    if b.grid.size < MIN_HYPER_POINTS:
        raise ResolutionError(
            f"grid has {b.grid.size} points; need >= {MIN_HYPER_POINTS} for stable differentiation"
        )
    mollified = conv_positive(PhiKernel(k.lam + 1.0), b)
    deriv = np.gradient(mollified.values, b.grid, edge_order=2)
    return b.with_values(deriv)


def convolve(kernel, b: GridFunction) -> GridFunction:
    """Dispatch on kernel order: delta, positive, or hyper-singular."""
    if isinstance(kernel, Delta):
        return b
    if kernel.lam > 0:
        return conv_positive(kernel, b)
    return conv_hyper(kernel, b)


def semigroup_check(lam: float, mu: float, b: GridFunction) -> float:
    """Max-norm discrepancy of k_lam * (k_mu * b) versus k_{lam+mu} * b.

    Orders summing to zero exercise the delta identity. The comparison skips
    the first interior samples where a hyper-singular factor is evaluated by
    one-sided differentiation.
    """
    k_lam = Delta() if lam == 0 else PhiKernel(lam)
    k_mu = Delta() if mu == 0 else PhiKernel(mu)
    lhs = convolve(k_lam, convolve(k_mu, b))
    total = lam + mu
    rhs = b if total == 0 else convolve(PhiKernel(total), b)
    skip = 1 if (lam > 0 and mu > 0) else max(1, np.searchsorted(b.grid, 0.05))
    return float(np.max(np.abs(lhs.values[skip:] - rhs.values[skip:])))
