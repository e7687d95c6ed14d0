import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from d2dshare import numerics
from d2dshare.errors import DomainError, NoConvergence
from d2dshare.model import PathlossModel

from oracles import annulus_riemann, exp1_series, hyp2f1_euler

D2D = PathlossModel(40.0, 28.0)


def test_gauss_nodes_match_legendre():
    x, w = np.polynomial.legendre.leggauss(7)
    np.testing.assert_allclose(numerics.KRONROD_NODES[1::2], x, atol=1e-15)
    np.testing.assert_allclose(numerics.GAUSS_WEIGHTS, w, atol=1e-15)
    assert numerics.KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("deg", range(0, 23))
def test_kronrod_exact_for_polynomials(deg):
    val, _ = numerics.adaptive_quad(lambda x: x**deg, 0.0, 2.0)
    assert val == pytest.approx(2.0 ** (deg + 1) / (deg + 1), rel=1e-13)


def test_exponential():
    assert numerics.integrate_semi_infinite(lambda x: np.exp(-x)) == pytest.approx(1.0, abs=1e-9)


def test_exponential_integral_identity():
    expected = math.exp(0.1) * exp1_series(0.1)
    assert expected == pytest.approx(2.0147, abs=1e-4)
    val = numerics.integrate_semi_infinite(lambda x: np.exp(-x / 10) / (1 + x))
    assert val == pytest.approx(expected, rel=1e-8)


def test_divergent_integral():
    with pytest.raises(NoConvergence):
        numerics.integrate_semi_infinite(lambda x: 1.0 / (1.0 + x))


def test_tolerance_halving():
    f = lambda x: np.exp(-x / 10) / (1 + x) / (1 + 0.01 * x * x)
    coarse, err = numerics.adaptive_quad(numerics._to_unit_interval(f), 0, 1, 1e-8, 1e-6)
    fine, _ = numerics.adaptive_quad(numerics._to_unit_interval(f), 0, 1, 5e-9, 5e-7)
    assert abs(coarse - fine) <= max(err, 1e-8, 1e-6 * abs(fine))


def test_annulus_zero_gamma():
    assert numerics.annulus_integral(0.0, 30.0, 79.62, math.inf, D2D) == 0.0


def test_annulus_monotone_in_gamma():
    vals = [numerics.annulus_integral(g, 30.0, 79.62, math.inf, D2D) for g in (0.1, 1.0, 10.0, 100.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_annulus_against_grid():
    val = numerics.annulus_integral(1.0, 30.0, 79.62, math.inf, D2D)
    # the tail beyond 1e6 m contributes ~pi d^4 / r^2, far below 0.5%
    ref = annulus_riemann(1.0, 30.0, 79.62, 1e6, D2D.exponent)
    assert val == pytest.approx(ref, rel=5e-3)


def test_annulus_ring_against_grid():
    val = numerics.annulus_integral(2.0, 30.0, 20.0, 80.0, D2D)
    ref = annulus_riemann(2.0, 30.0, 20.0, 80.0, D2D.exponent, nr=4000, nphi=4000)
    assert val == pytest.approx(ref, rel=5e-3)


@settings(deadline=None, max_examples=15)
@given(split=st.floats(40.0, 2000.0), gamma=st.floats(0.05, 20.0))
def test_annulus_split_additivity(split, gamma):
    whole = numerics.annulus_integral(gamma, 30.0, 39.81, math.inf, D2D)
    parts = numerics.annulus_integral(gamma, 30.0, 39.81, split, D2D) + numerics.annulus_integral(
        gamma, 30.0, split, math.inf, D2D
    )
    assert parts == pytest.approx(whole, rel=1e-7, abs=1e-8)


def test_annulus_domain():
    with pytest.raises(DomainError):
        numerics.annulus_integral(1.0, 30.0, 50.0, 40.0, D2D)
    with pytest.raises(DomainError):
        numerics.annulus_integral(-1.0, 30.0, 10.0, 40.0, D2D)


def test_hyp2f1_arctan():
    assert numerics.hyp2f1_neg(1.0, 0.5, 1.5, -1.0) == pytest.approx(math.pi / 4, rel=1e-12)


def test_hyp2f1_at_zero():
    assert numerics.hyp2f1_neg(1.0, 0.3, 1.7, 0.0) == 1.0


@pytest.mark.parametrize("a", [3.0, 3.76, 4.0])
@pytest.mark.parametrize("z", [-1e-3, -0.3, -0.5, -0.9, -1.0, -1.5, -2.0, -2.5, -10.0, -100.0])
def test_hyp2f1_against_euler_integral(a, z):
    b, c = (a - 2) / a, 2 - 2 / a
    assert numerics.hyp2f1_neg(1.0, b, c, z) == pytest.approx(hyp2f1_euler(1.0, b, c, z), rel=1e-8)


@given(
    a=st.floats(0.1, 3.0),
    b=st.floats(0.1, 3.0),
    c=st.floats(0.3, 4.0),
    z=st.floats(-50.0, 0.0),
)
def test_hyp2f1_against_scipy(a, b, c, z):
    ref = special.hyp2f1(a, b, c, z)
    if not np.isfinite(ref) or abs(ref) < 1e-6:
        return
    assert numerics.hyp2f1_neg(a, b, c, z) == pytest.approx(ref, rel=1e-8)


def test_hyp2f1_domain():
    with pytest.raises(DomainError):
        numerics.hyp2f1_neg(1.0, 0.5, 1.5, 0.2)
    with pytest.raises(DomainError):
        numerics.hyp2f1_neg(1.0, 0.5, -2.0, -0.2)
