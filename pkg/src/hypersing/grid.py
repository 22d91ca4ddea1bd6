"""Time grids and sampled functions on [0, T]."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


def uniform_grid(T: float, M: int) -> np.ndarray:
    """M+1 equally spaced sample times on [0, T]."""
    if T <= 0 or M < 1:
        raise DomainError(f"uniform_grid needs T > 0 and M >= 1, got T={T}, M={M}")
    return np.linspace(0.0, T, M + 1)


def graded_grid(T: float, M: int, gamma: float = 4.0) -> np.ndarray:
    """M+1 sample times t_i = T*(i/M)**gamma, clustered near 0.

    gamma=4 resolves t**(1/4) behavior near the origin; gamma=1 is uniform.
    """
    if T <= 0 or M < 1 or gamma < 1:
        raise DomainError(f"graded_grid needs T > 0, M >= 1, gamma >= 1, got T={T}, M={M}, gamma={gamma}")
    return T * (np.arange(M + 1) / M) ** gamma


@dataclass(frozen=True)
class GridFunction:
    """Real- or complex-valued samples on a strictly increasing grid t_0=0 < ... < t_M.

    Values between samples are understood as piecewise linear.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid.ndim != 1 or values.ndim != 1 or grid.size != values.size or grid.size < 2:
            raise DomainError("GridFunction needs matching 1-d grid/values of length >= 2")
        if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise DomainError("grid must start at 0 and be strictly increasing")
        if not np.all(np.isfinite(grid)) or not np.all(np.isfinite(values)):
            raise DomainError("grid and values must be NaN/Inf-free")

    @classmethod
    def from_callable(cls, f, grid: np.ndarray) -> "GridFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(f(grid)))

    @property
    def T(self) -> float:
        return float(self.grid[-1])

    def __call__(self, t):
        """Piecewise-linear interpolation at time(s) t."""
        return np.interp(t, self.grid, self.values)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def window(self, t_lo: float, t_hi: float) -> "np.ndarray":
        """Boolean mask of samples with t_lo <= t <= t_hi."""
        return (self.grid >= t_lo) & (self.grid <= t_hi)

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values)
