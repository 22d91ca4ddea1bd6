"""Forward Laplace transform on the half line and two independent inversions.

The inversion contour of record is the imaginary axis p = i*w, folded onto
the half line by conjugate symmetry and summed with QUADPACK's Fourier-weight
quadrature (adaptive cycle summation with extrapolation). The cross-checking
second method is a fixed Talbot contour, valid because every image handled
here is analytic off the negative real axis, where the p**(1/4) branch cut
lies (principal branch, arg p in (-pi, pi]).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DomainError, MethodDisagreement, TailModelError
from .grid import GridFunction


# ---------------------------------------------------------------------------
# forward transform of sampled data


@dataclass(frozen=True)
class TailModel:
    """Behavior of a sampled function beyond its last grid point T."""

    kind: Literal["none", "constant", "exponential"]
    rate: float = 0.0  # decay rate for the exponential kind

    @classmethod
    def fit_exponential(cls, b: GridFunction, fraction: float = 0.1) -> "TailModel":
        """Fit b(t) ~ b(T) * exp(-rate*(t-T)) from the last samples."""
        n = max(3, int(fraction * b.grid.size))
        t, v = b.grid[-n:], b.values[-n:]
        if np.any(np.real(v) <= 0):
            raise TailModelError("exponential tail fit needs positive trailing samples")
        slope = np.polyfit(t, np.log(np.real(v)), 1)[0]
        if slope >= 0:
            raise TailModelError(f"fitted tail decay rate {-slope} is not positive")
        return cls("exponential", rate=-slope)


def _phi0(x):
    """(1 - exp(-x))/x, stable near 0."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 0.05
    xs = np.where(small, 0.0, x)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = (1.0 - np.exp(-xs)) / np.where(small, 1.0, xs)
    series = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(8):
        series += term / (k + 1)
        term = term * (-x) / (k + 1)
    return np.where(small, series, direct)


def _phi1(x):
    """(1 - (1+x)exp(-x))/x**2, stable near 0."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 0.05
    xs = np.where(small, 1.0, x)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = (1.0 - (1.0 + xs) * np.exp(-xs)) / xs ** 2
    series = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(8):
        series += term * (k + 1) / math.factorial(k + 2)
        term = term * (-x)
    return np.where(small, series, direct)


def forward_laplace(b: GridFunction, p: complex, tail: TailModel | str = "exponential") -> complex:
    """L(b)(p) = int_0^inf exp(-p*t) b(t) dt for Re p >= 0.

    The grid part integrates exp(-p*t) exactly against the piecewise-linear
    samples; the part beyond T comes from the tail model in closed form.
    """
    if np.real(p) < 0:
        raise DomainError("forward_laplace requires Re p >= 0")
    if isinstance(tail, str):
        tail = TailModel.fit_exponential(b) if tail == "exponential" else TailModel(tail)

    a = b.grid[:-1]
    h = np.diff(b.grid)
    bL = b.values[:-1].astype(complex)
    bR = b.values[1:].astype(complex)
    x = p * h
    cells = np.exp(-p * a) * h * (bL * _phi0(x) + (bR - bL) * _phi1(x))
    grid_part = complex(np.sum(cells))

    T = b.grid[-1]
    bT = complex(b.values[-1])
    if tail.kind == "none":
        tail_part = 0.0
    elif tail.kind == "constant":
        if p == 0:
            raise DomainError("constant tail has no transform at p = 0")
        tail_part = bT * np.exp(-p * T) / p
    else:
        tail_part = bT * np.exp(-p * T) / (p + tail.rate)
    return grid_part + tail_part


# ---------------------------------------------------------------------------
# images and inversion


def phi_image(lam: float, p) -> complex:
    """p**(-lam) on the principal branch; the image of the order-lam kernel."""
    p = np.asarray(p, dtype=complex)
    if np.any(p == 0):
        raise DomainError("phi_image undefined at p = 0")
    out = np.exp(-lam * np.log(p))
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LaplaceImage:
    """A callable image F(p) with branch metadata.

    ``evaluator`` must accept complex numpy arrays. Images of real-valued
    originals satisfy F(conj p) = conj F(p). ``pole_at_origin`` moves the
    inversion contour slightly right of the axis so a simple pole at p = 0
    (a constant original) is captured instead of principal-valued.
    """

    evaluator: Callable
    pole_at_origin: bool = False

    def __call__(self, p):
        return self.evaluator(np.asarray(p, dtype=complex))


@dataclass(frozen=True)
class InversionConfig:
    """Method selection and accuracy knobs for the inverse transform.

    ``truncation`` is the cycle cap of the oscillatory quadrature for the
    axis contour and the node count for the Talbot contour.
    """

    method: Literal["bromwich", "talbot", "both"] = "both"
    truncation: int = 48
    tol: float = 1e-8

    def __post_init__(self):
        if self.truncation <= 0 or self.tol <= 0:
            raise DomainError("truncation and tol must be positive")


def _bromwich_at_shift(image: LaplaceImage, t: float, tol: float, limit: int, shift: float) -> float:
    def re_part(w):
        return image(shift + 1j * w).real if (w > 0 or shift > 0) else 0.0

    def im_part(w):
        return image(shift + 1j * w).imag if (w > 0 or shift > 0) else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rc, ec = quad(re_part, 0, np.inf, weight="cos", wvar=t, epsabs=tol, limit=limit)
        rs, es = quad(im_part, 0, np.inf, weight="sin", wvar=t, epsabs=tol, limit=limit)
    if ec + es > 1e3 * tol:
        raise ConvergenceError(f"oscillatory truncation error estimate {ec + es} exceeds tolerance {tol}")
    return math.exp(shift * t) * (rc - rs) / math.pi


def _bromwich(image: LaplaceImage, t: float, tol: float, limit: int) -> float:
    """Fold the axis contour: f(t) = (1/pi) int_0^inf Re[F(s+iw) e^{iwt}] dw.

    Any vertical contour inside the half plane of analyticity is equivalent,
    so if the oscillatory extrapolation stalls on the axis itself the integral
    is retried on a shifted line before failing.
    """
    shift = 1.0 / t if image.pole_at_origin else 0.0
    try:
        return _bromwich_at_shift(image, t, tol, limit, shift)
    except ConvergenceError:
        if image.pole_at_origin:
            raise
        return _bromwich_at_shift(image, t, tol, limit, 1.0 / t)


def _talbot_nodes(t: float, M: int):
    r = 2.0 * M / (5.0 * t)
    theta = np.arange(1, M) * np.pi / M
    cot = 1.0 / np.tan(theta)
    s = r * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    return r, s, sigma


def _talbot(image: LaplaceImage, t: float, M: int) -> float:
    """Fixed Talbot contour sum with M nodes (Abate-Valko parameterization)."""
    r, s, sigma = _talbot_nodes(t, M)
    vals = np.exp(t * s) * image(s) * (1.0 + 1j * sigma)
    apex = np.real(np.asarray(image(np.array([r + 0j]))).ravel()[0])
    return float((r / M) * (0.5 * math.exp(r * t) * apex + np.sum(vals.real)))


def invert(image: LaplaceImage, t: float, cfg: InversionConfig = InversionConfig()) -> float:
    """Real inverse transform at t > 0 by the configured method.

    With method="both" the Talbot value is returned after checking agreement
    with the axis contour to within 10x the configured tolerance.
    """
    if t <= 0:
        raise DomainError("invert requires t > 0")
    if cfg.method == "bromwich":
        return _bromwich(image, t, cfg.tol, max(cfg.truncation, 50))
    if cfg.method == "talbot":
        return _talbot(image, t, cfg.truncation)
    vb = _bromwich(image, t, cfg.tol, max(cfg.truncation, 50))
    vt = _talbot(image, t, cfg.truncation)
    if abs(vb - vt) > 10 * cfg.tol * max(1.0, abs(vt)):
        raise MethodDisagreement(f"bromwich {vb} vs talbot {vt} at t={t}")
    return vt


def inversion_crosscheck(image: LaplaceImage, ts, cfg: InversionConfig = InversionConfig()) -> float:
    """Max over ts of |bromwich - talbot|; raises above 10x combined tolerance."""
    disc = 0.0
    for t in np.asarray(ts, dtype=float):
        vb = _bromwich(image, float(t), cfg.tol, max(cfg.truncation, 50))
        vt = _talbot(image, float(t), cfg.truncation)
        disc = max(disc, abs(vb - vt))
    if disc > 10 * cfg.tol:
        raise MethodDisagreement(f"methods disagree by {disc} (tol {cfg.tol})")
    return disc


def inf_denominator_bound(c: float, c1: float, taus) -> float:
    """min over taus of |1 + c*c1*exp(i pi/8) tau**(1/4)|.

    The closed form |.|**2 = 1 + C**2 + 2C cos(pi/8) with C >= 0 is minimized
    at C = 0, so the result is always >= 1; this is the computable form of
    the denominator lower bound in the boundedness argument.
    """
    if c <= 0 or c1 <= 0:
        raise DomainError("c and c1 must be positive")
    taus = np.asarray(taus, dtype=float)
    C = c * c1 * taus ** 0.25
    return float(np.min(np.sqrt(1.0 + C ** 2 + 2.0 * C * math.cos(math.pi / 8.0))))
