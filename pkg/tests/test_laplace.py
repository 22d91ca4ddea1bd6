"""Forward transform of sampled data and the two inversion contours."""

import math

import numpy as np
import pytest

from hypersing.errors import DomainError, MethodDisagreement
from hypersing.grid import GridFunction, graded_grid, uniform_grid
from hypersing.laplace import (
    InversionConfig,
    LaplaceImage,
    TailModel,
    forward_laplace,
    inf_denominator_bound,
    invert,
    inversion_crosscheck,
    phi_image,
)


@pytest.fixture(scope="module")
def exp_samples():
    g = graded_grid(8.0, 512, 2.0)
    return GridFunction(g, np.exp(-g))


def test_tail_fit_recovers_rate(exp_samples):
    tail = TailModel.fit_exponential(exp_samples)
    assert tail.kind == "exponential"
    assert tail.rate == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("p", [0.3, 1.0, 2.0 + 3.0j, 0.1 + 10.0j])
def test_forward_laplace_exponential(exp_samples, p):
    got = forward_laplace(exp_samples, p)
    assert abs(got - 1.0 / (p + 1.0)) < 1e-4 * abs(1.0 / (p + 1.0)) + 1e-8


def test_forward_laplace_rejects_left_half_plane(exp_samples):
    with pytest.raises(DomainError):
        forward_laplace(exp_samples, -0.5)


def test_phi_image_values():
    assert phi_image(0.5, 4.0) == pytest.approx(0.5)
    assert phi_image(1.0, 2.0j) == pytest.approx(-0.5j)
    with pytest.raises(DomainError):
        phi_image(0.5, 0.0)


def test_invert_exponential_image():
    image = LaplaceImage(lambda p: 1.0 / (p + 1.0))
    for t in (0.2, 1.0, 3.0):
        assert invert(image, t) == pytest.approx(math.exp(-t), abs=1e-7)


def test_invert_pole_at_origin():
    const = LaplaceImage(lambda p: 1.0 / p, pole_at_origin=True)
    ramp = LaplaceImage(lambda p: 1.0 / (p * (p + 1.0)), pole_at_origin=True)
    for t in (0.5, 2.0):
        assert invert(const, t) == pytest.approx(1.0, abs=1e-7)
        assert invert(ramp, t) == pytest.approx(1.0 - math.exp(-t), abs=1e-7)


def test_invert_methods_individually():
    image = LaplaceImage(lambda p: phi_image(0.5, p))
    exact = lambda t: t ** -0.5 / math.sqrt(math.pi)
    for method in ("bromwich", "talbot"):
        cfg = InversionConfig(method=method)
        assert invert(image, 1.5, cfg) == pytest.approx(exact(1.5), rel=1e-6)


def test_invert_rejects_nonpositive_time():
    image = LaplaceImage(lambda p: 1.0 / (p + 1.0))
    with pytest.raises(DomainError):
        invert(image, 0.0)


def test_crosscheck_agrees_and_flags_disagreement():
    good = LaplaceImage(lambda p: 1.0 / (p + 1.0))
    assert inversion_crosscheck(good, [0.5, 1.0, 2.0]) < 1e-7
    # an image that is not analytic in p takes different values on the two
    # contours, so the routes must disagree
    bad = LaplaceImage(lambda p: 1.0 / (p + 1.0) + 0.1 / (1.0 + np.abs(p)))
    with pytest.raises(MethodDisagreement):
        inversion_crosscheck(bad, [1.0])


def test_inversion_config_validation():
    with pytest.raises(DomainError):
        InversionConfig(truncation=0)
    with pytest.raises(DomainError):
        InversionConfig(tol=0.0)


def test_inf_denominator_bound():
    taus = np.linspace(0.0, 100.0, 1001)
    val = inf_denominator_bound(1.0, 4.9017, taus)
    assert val == pytest.approx(1.0, abs=1e-14)
    # away from tau=0 the modulus strictly exceeds 1
    val_pos = inf_denominator_bound(1.0, 4.9017, taus[1:])
    assert val_pos > 1.0
    with pytest.raises(DomainError):
        inf_denominator_bound(0.0, 1.0, taus)
