"""Convolution family: evaluation, positive and continued orders, identities."""

import math

import numpy as np
import pytest

from hypersing.errors import PoleError, ResolutionError
from hypersing.grid import GridFunction, graded_grid, uniform_grid
from hypersing.kernel_algebra import (
    Delta,
    PhiKernel,
    conv_hyper,
    conv_positive,
    convolve,
    phi_eval,
    semigroup_check,
)
from hypersing.special_functions import gamma


def _ml_conv_exp(mu, t, terms=60):
    """Order-mu convolution of exp(-t): t**mu * sum_k (-t)**k / Gamma(mu+k+1)."""
    s = 0.0
    for k in range(terms):
        s += (-t) ** k / math.gamma(mu + k + 1.0)
    return t ** mu * s


def test_phi_eval_values():
    k = PhiKernel(0.5)
    assert phi_eval(k, 4.0) == pytest.approx(0.5 / gamma(0.5), rel=1e-12)
    assert phi_eval(PhiKernel(1.0), 2.5) == pytest.approx(1.0)
    with pytest.raises(PoleError):
        PhiKernel(0.0)
    with pytest.raises(PoleError):
        PhiKernel(-1.0)


def test_conv_positive_order_one_is_running_integral():
    g = uniform_grid(4.0, 1024)
    b = GridFunction(g, np.exp(-g))
    out = conv_positive(PhiKernel(1.0), b)
    assert np.max(np.abs(out.values - (1.0 - np.exp(-g)))) < 2e-6


def test_conv_positive_matches_series():
    g = graded_grid(4.0, 512, 3.0)
    b = GridFunction(g, np.exp(-g))
    out = conv_positive(PhiKernel(0.5), b)
    t_check = g[g >= 0.1]
    ref = np.array([_ml_conv_exp(0.5, t) for t in t_check])
    got = np.interp(t_check, out.grid, out.values)
    assert np.max(np.abs(got - ref) / np.abs(ref)) < 5e-5


def test_conv_hyper_matches_series():
    g = graded_grid(4.0, 1024, 3.0)
    b = GridFunction(g, np.exp(-g))
    out = conv_hyper(PhiKernel(-0.25), b)
    t_check = g[(g >= 0.1) & (g <= 3.5)]
    ref = np.array([_ml_conv_exp(-0.25, t) for t in t_check])
    got = np.interp(t_check, out.grid, out.values)
    # mixed gate: the series reference crosses zero, so scale by its size plus
    # an O(1) floor matching the function's overall magnitude
    assert np.max(np.abs(got - ref) / (np.abs(ref) + 0.5)) < 1e-3


def test_conv_hyper_needs_resolution():
    g = uniform_grid(1.0, 16)
    b = GridFunction(g, np.exp(-g))
    with pytest.raises(ResolutionError):
        conv_hyper(PhiKernel(-0.25), b)


def test_convolve_delta_identity():
    g = uniform_grid(1.0, 32)
    b = GridFunction(g, np.cos(g))
    out = convolve(Delta(), b)
    assert np.array_equal(out.values, b.values)


def test_semigroup_positive_pair():
    g = graded_grid(5.0, 512, 4.0)
    b = GridFunction(g, np.exp(-g))
    assert semigroup_check(0.5, 0.5, b) < 1e-5
    assert semigroup_check(0.25, 1.5, b) < 1e-5


def test_semigroup_hyper_pair():
    g = graded_grid(5.0, 1024, 4.0)
    b = GridFunction(g, np.exp(-g))
    assert semigroup_check(0.25, -0.25, b) < 1e-3
