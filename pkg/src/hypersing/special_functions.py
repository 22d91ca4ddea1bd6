"""Gamma/Beta machinery and regularized singular moments.

The gamma evaluation uses a 15-digit Lanczos rational approximation for
z >= 0.5 and the reflection formula below; everything else in the package
funnels its kernel normalizations through these routines.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

from scipy.integrate import quad

from .errors import ConvergenceError, PoleError
from .quadrature import tail_integral

# Lanczos coefficients, g = 7, n = 9 (double precision).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

POLE_GUARD = 1e-9  # rejection radius around the poles z = 0, -1, -2, ...


def _near_pole(z: float) -> bool:
    return z <= 0.5 and abs(z - round(z)) < POLE_GUARD and round(z) <= 0


def _lanczos_gamma(z: float) -> float:
    # valid for z >= 0.5
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z - 1 + i)
    t = z - 0.5 + _LANCZOS_G
    return math.sqrt(2 * math.pi) * t ** (z - 0.5) * math.exp(-t) * x


def gamma(z: float) -> float:
    """Gamma(z) for real z away from the poles 0, -1, -2, ...

    For z < 0.5 the reflection formula Gamma(z)Gamma(1-z) = pi/sin(pi z)
    is used, so accuracy on the negative axis inherits from the positive one.
    """
    z = float(z)
    if _near_pole(z):
        raise PoleError(f"gamma evaluated within {POLE_GUARD} of a pole at z={z}")
    if z >= 0.5:
        return _lanczos_gamma(z)
    return math.pi / (math.sin(math.pi * z) * _lanczos_gamma(1.0 - z))


def reciprocal_gamma(z: float) -> float:
    """1/Gamma(z); entire, equal to 0 at z = 0, -1, -2, ..."""
    z = float(z)
    if z <= 0.5 and z == round(z) and round(z) <= 0:
        return 0.0
    if _near_pole(z):
        # 1/Gamma is tiny but smooth here; use reflection directly.
        return math.sin(math.pi * z) * _lanczos_gamma(1.0 - z) / math.pi
    return 1.0 / gamma(z)


def beta(lam: float, mu: float) -> float:
    """Euler Beta function Gamma(lam)Gamma(mu)/Gamma(lam+mu)."""
    return gamma(lam) * gamma(mu) * reciprocal_gamma(lam + mu)


@dataclass(frozen=True)
class AnalyticFunction:
    """A smooth integrand with caller-supplied derivatives at 0.

    ``taylor[k]`` is the k-th derivative at 0; supplying these analytically
    keeps the continuation formula free of differentiation noise.
    """

    fn: Callable[[float], float]
    taylor: Sequence[float]

    def head_term(self, t, depth: int):
        """Taylor polynomial of order depth-1 at the origin."""
        s = 0.0
        for k in range(depth):
            s += self.taylor[k] / math.factorial(k) * t ** k
        return s


@dataclass(frozen=True)
class RegularizationSpec:
    """Order and subtraction depth for a regularized singular moment."""

    lam: float
    subtraction_depth: int = 0
    split_point: float = 1.0

    MAX_DEPTH = 8  # documented cap; deeper continuation is out of scope

    def __post_init__(self):
        if self.subtraction_depth < 0 or self.subtraction_depth > self.MAX_DEPTH:
            raise ValueError(f"subtraction_depth must be in [0, {self.MAX_DEPTH}]")
        if self.split_point <= 0:
            raise ValueError("split_point must be positive")
        if self.lam + self.subtraction_depth <= 0:
            raise ValueError(
                f"need lam + N > 0 for classical convergence, got lam={self.lam}, N={self.subtraction_depth}"
            )
        for k in range(self.subtraction_depth):
            if abs(self.lam + k) < POLE_GUARD:
                raise PoleError(f"lam + {k} = {self.lam + k} hits a continuation pole")
        if self.lam <= 0 and abs(self.lam - round(self.lam)) < POLE_GUARD:
            raise PoleError(f"lam={self.lam} is a pole of the moment")


def regularized_moment(phi: AnalyticFunction, spec: RegularizationSpec, tol: float = 1e-10) -> float:
    """Analytic continuation of int_0^inf t**(lam-1) phi(t) dt.

    Splits at ``spec.split_point``: the tail converges classically, the head is
    integrated with the first N Taylor terms of phi subtracted, and the
    subtracted terms are put back in closed form, each contributing
    phi^(k)(0)/k! * a**(lam+k)/(lam+k).
    """
    lam, N, a = spec.lam, spec.subtraction_depth, spec.split_point

    tail = tail_integral(lambda t: t ** (lam - 1.0) * phi.fn(t), a, tol)

    def head_integrand(t):
        return t ** (lam - 1.0) * (phi.fn(t) - phi.head_term(t, N))

    with warnings.catch_warnings():
        # the returned error estimate is gated below, so the advisory warning
        # about reaching the roundoff floor is redundant
        warnings.simplefilter("ignore")
        head, head_err = quad(head_integrand, 0.0, a, epsabs=tol, epsrel=tol, limit=200)
    if head_err > 100 * max(tol, 1e-14 * abs(head)) + 1e-12:
        raise ConvergenceError(f"head quadrature error estimate {head_err} exceeds tolerance")

    closed = 0.0
    for k in range(N):
        closed += phi.taylor[k] / math.factorial(k) * a ** (lam + k) / (lam + k)

    return tail + head + closed
