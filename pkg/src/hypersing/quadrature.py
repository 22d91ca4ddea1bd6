"""Product-integration rules for weakly singular kernels and tail quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class SingularRule:
    """Moment-exact weights for int_0^{t_i} (t_i - s)**(lam-1) b(s) ds.

    ``weights`` is lower triangular: row i applied to the samples of a
    piecewise-linear b reproduces the i-th running convolution exactly for
    linear b, because the kernel moments over each cell are closed-form.
    """

    exponent: float  # lam - 1
    grid: np.ndarray
    weights: np.ndarray

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.weights @ values


def singular_weights(lam: float, grid: np.ndarray) -> SingularRule:
    """Build the product-integration rule for kernel (t-s)**(lam-1), lam > 0.

    For each cell [t_j, t_{j+1}] and target t_i the first two moments of the
    kernel are integrated in closed form against the linear hat basis, so the
    weak singularity at s = t_i costs no accuracy.
    """
    if lam <= 0:
        raise DomainError(f"singular_weights needs lam > 0, got {lam}; hyper-singular orders are handled upstream")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be 1-d and strictly increasing")

    M = grid.size - 1
    tL = grid[:-1][None, :]  # cell left edges, shape (1, M)
    tR = grid[1:][None, :]   # cell right edges
    h = (tR - tL)
    ti = grid[1:][:, None]   # targets t_1..t_M, shape (M, 1)

    # u = t_i - s over cell j: u in [A, B], only cells with j < i contribute.
    A = ti - tR
    B = ti - tL
    active = A > -1e-15  # cell fully left of target
    A = np.clip(A, 0.0, None)
    with np.errstate(invalid="ignore", divide="ignore"):
        M0 = (B ** lam - A ** lam) / lam
        M1 = (B ** (lam + 1.0) - A ** (lam + 1.0)) / (lam + 1.0)
    M0 = np.where(active, M0, 0.0)
    M1 = np.where(active, M1, 0.0)

    # b(s) over the cell in terms of u: b = b_L*(u - A)/h + b_R*(B - u)/h
    wL = (M1 - A * M0) / h
    wR = (B * M0 - M1) / h

    # The closed forms cancel catastrophically when a cell is tiny relative to
    # its distance from the target (h << A, e.g. strongly graded grids); the
    # kernel is smooth there, so 4-point Gauss-Legendre is exact to rounding.
    far = active & (h < 0.2 * A)
    if np.any(far):
        gl_x = np.array([0.06943184420297371, 0.33000947820757187,
                         0.6699905217924281, 0.9305681557970262])
        gl_w = np.array([0.17392742256872693, 0.3260725774312731,
                         0.3260725774312731, 0.17392742256872693])
        hb = np.broadcast_to(h, A.shape)
        Af, hf = A[far], hb[far]
        wLf = np.zeros_like(Af)
        wRf = np.zeros_like(Af)
        for xk, wk in zip(gl_x, gl_w):
            uk = Af + hf * xk
            kern = wk * uk ** (lam - 1.0)
            wLf += kern * xk
            wRf += kern * (1.0 - xk)
        wL[far] = hf * wLf
        wR[far] = hf * wRf

    weights = np.zeros((M + 1, M + 1))
    weights[1:, :-1] += wL
    weights[1:, 1:] += wR
    return SingularRule(exponent=lam - 1.0, grid=grid, weights=weights)


def tail_integral(f, a: float, tol: float = 1e-10) -> float:
    """Adaptive quadrature of int_a^inf f(t) dt with absolute error <= tol.

    The infinite range is handled by QUADPACK's own mapping; the error
    estimate is surfaced so a stalled estimator is an explicit failure.
    """
    if a <= 0:
        raise DomainError("tail_integral requires a > 0")
    val, err = quad(f, a, np.inf, epsabs=tol, epsrel=tol, limit=300)
    if err > 100 * max(tol, 1e-14 * abs(val)) + 1e-12:
        raise ConvergenceError(f"tail quadrature error estimate {err} exceeds tolerance {tol}")
    return val
