"""Both solver routes, operator-norm certificates, and small-time fits."""

import math

import numpy as np
import pytest

from hypersing.errors import DomainError, FitError, NonConvergence
from hypersing.grid import GridFunction, graded_grid, uniform_grid
from hypersing.laplace import InversionConfig
from hypersing.special_functions import gamma, reciprocal_gamma
from hypersing.volterra import (
    VolterraProblem,
    iterated_kernel_closed_form,
    make_problem,
    power_law_prefactor,
    small_time_exponent,
    solve_laplace,
    solve_picard,
    spectral_bound_check,
)


def test_problem_validation():
    g = uniform_grid(1.0, 8)
    b0 = GridFunction(g, np.ones(9))
    with pytest.raises(DomainError):
        VolterraProblem(b0=b0, c=0.0)
    with pytest.raises(DomainError):
        VolterraProblem(b0=b0, c=1.0, lam=-0.5)
    prob = VolterraProblem(b0=b0, c=2.0)
    assert prob.cc1 == pytest.approx(2.0 * 4.0 * gamma(0.75), rel=1e-12)


def test_make_problem_unknown_forcing():
    with pytest.raises(DomainError):
        make_problem("nope", 1.0, uniform_grid(1.0, 8))


def test_picard_certificate_and_fixed_point():
    prob = make_problem("exp", 1.0, graded_grid(5.0, 512, 4.0))
    b, cert = solve_picard(prob)
    assert cert.residual <= 1e-9
    assert cert.iterations == len(cert.diff_history)
    # solution stays nonnegative and below the forcing's peak
    assert np.all(np.real(b.values) >= -1e-12)
    assert b.norm_inf() <= prob.b0.norm_inf()


def test_picard_nonconvergence_raises():
    prob = make_problem("exp", 1.0, graded_grid(5.0, 256, 4.0))
    with pytest.raises(NonConvergence):
        solve_picard(prob, tol=1e-14, max_iter=2)


def test_routes_agree_on_talbot_safe_forcing():
    prob = make_problem("texp", 2.0, graded_grid(5.0, 512, 4.0))
    bp, _ = solve_picard(prob)
    bl = solve_laplace(prob)
    late = prob.b0.grid >= 0.1
    rel = np.abs(bp.values[late] - bl.values[late]) / np.maximum(np.abs(bp.values[late]), 1e-10)
    assert np.max(rel) < 1e-3
    assert bl.values[0] == 0.0


def test_routes_agree_on_axis_only_forcing():
    # the transform of exp(-t**2) grows in the left half plane, so the solver
    # must fall back to the axis contour throughout
    prob = make_problem("gauss", 1.0, graded_grid(3.0, 96, 2.0))
    assert not prob.image_talbot_safe
    bp, _ = solve_picard(prob)
    bl = solve_laplace(prob, InversionConfig(tol=1e-8))
    late = prob.b0.grid >= 0.2
    rel = np.abs(bp.values[late] - bl.values[late]) / np.abs(bp.values[late])
    assert np.max(rel) < 1e-2


def test_spectral_bound_certificate():
    g = graded_grid(1.0, 512, 3.0)
    f = GridFunction(g, np.exp(-g))
    cert = spectral_bound_check(-0.75, f, n_max=6)
    assert all(row["ok"] for row in cert.bound_check)
    # for the plain running integral the n-th roots of the measured norms
    # decay quickly -- the numerical signature of spectral radius zero
    cert0 = spectral_bound_check(0.0, f, n_max=8)
    roots = [row["nth_root"] for row in cert0.bound_check]
    assert roots[-1] < 0.5 * roots[0]


def test_iterated_kernel_matches_direct_bound():
    for p in (0.0, -0.75, 0.5):
        for n in range(1, 9):
            direct = gamma(p + 1.0) ** n * reciprocal_gamma(n * (p + 1.0) + 1.0)
            assert iterated_kernel_closed_form(p, n, 1.0) == pytest.approx(direct, rel=1e-12)
            assert iterated_kernel_closed_form(p, n, 2.0) == pytest.approx(
                direct * 2.0 ** (n * (p + 1.0)), rel=1e-12)


def test_small_time_fits_on_pure_power():
    g = graded_grid(1.0, 1024, 4.0)
    b = GridFunction(g, 0.7 * g ** 0.25)
    slope, pref = small_time_exponent(b, (1e-4, 1e-2))
    assert slope == pytest.approx(0.25, abs=1e-10)
    assert pref == pytest.approx(0.7, rel=1e-10)
    assert power_law_prefactor(b, (1e-4, 1e-2), 0.25) == pytest.approx(0.7, rel=1e-12)


def test_fit_error_cases():
    g = graded_grid(1.0, 64, 1.0)
    b = GridFunction(g, 1.0 + g)
    with pytest.raises(FitError):
        small_time_exponent(b, (1e-6, 1e-5))  # no samples in window
    b_neg = GridFunction(g, g - 0.5)
    with pytest.raises(FitError):
        small_time_exponent(b_neg, (0.01, 1.0))  # nonpositive samples
    # wildly non-power data fails the residual gate
    b_osc = GridFunction(g, 2.0 + np.sin(40.0 * g))
    with pytest.raises(FitError):
        small_time_exponent(b_osc, (0.05, 1.0))
