import math

import pytest
from hypothesis import assume, given, strategies as st

from d2dshare.errors import BothZero
from d2dshare.mode_selection import (
    cellular_mode_load,
    hardcore_distance,
    multiop_ratio,
    retention,
    select_modes,
)
from d2dshare.model import DEFAULT_LAMBDA_B, OperatorParams, PathlossModel, SharedParams, default_scenario

D2D = PathlossModel(40.0, 28.0)
LB = DEFAULT_LAMBDA_B


def test_hardcore_distances():
    assert hardcore_distance(-72.0, 20.0, D2D) == pytest.approx(10 ** (64 / 40), rel=1e-12)
    assert hardcore_distance(-72.0, 20.0, D2D) == pytest.approx(39.81, abs=5e-3)
    assert hardcore_distance(-75.0, 20.0, D2D) == pytest.approx(10 ** (67 / 40), rel=1e-12)
    assert hardcore_distance(20.0 - 28.0, 20.0, D2D) == pytest.approx(1.0)


def test_retention_examples():
    assert retention(1e-5, 0.0) == 1.0
    assert retention(0.0, 40.0) == 1.0
    lam = 4 * LB
    x = lam * math.pi * 39.81**2
    assert x == pytest.approx(0.1585, abs=2e-4)
    assert retention(lam, 39.81) == pytest.approx(0.9248, abs=1e-4)
    assert retention(1.0, 1e4) < 1e-8


@given(st.floats(1e-7, 1e-2), st.floats(0.0, 500.0), st.floats(1.01, 3.0))
def test_retention_decreasing(lam, delta, factor):
    q = retention(lam, delta)
    assert 0.0 < q <= 1.0
    assume(lam * math.pi * delta**2 < 50)
    assume(delta > 1e-2)
    assert retention(lam, delta * factor) < q
    assert retention(lam * factor, delta) < q


@given(st.floats(0.0, 1e-9))
def test_retention_continuous_at_zero(x):
    # across the series/expm1 switch
    delta = math.sqrt(x / math.pi) if x > 0 else 0.0
    assert retention(1.0, delta) == pytest.approx(1 - x / 2, abs=1e-15)


def _op(lambda_c=LB, lambda_d=LB):
    return OperatorParams(1, LB, lambda_c, lambda_d)


def test_load_examples():
    shared = SharedParams(lam=4 * LB)
    load, alpha = cellular_mode_load(_op(), shared, 1.0, 1.0)
    assert load == pytest.approx(LB) and alpha == 1.0
    _, alpha = cellular_mode_load(_op(lambda_c=0.5 * LB), shared, 1.0, 1.0)
    assert alpha == pytest.approx(0.5)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_alpha_non_increasing(qd1, qd2, q1, q2):
    shared = SharedParams(lam=4 * LB)
    op = _op(lambda_c=0.2 * LB)
    lo_qd, hi_qd = sorted((qd1, qd2))
    lo_q, hi_q = sorted((q1, q2))
    assert cellular_mode_load(op, shared, hi_qd, hi_q)[1] <= cellular_mode_load(op, shared, lo_qd, lo_q)[1]


def test_default_modes():
    sc = default_scenario()
    modes = select_modes(sc.operators[0], sc.shared)
    assert modes.shared.q == pytest.approx(retention(4 * LB, 10 ** 1.6), rel=1e-14)
    assert modes.intra.q == pytest.approx(retention(LB, 10 ** (67 / 40)), rel=1e-14)
    # cellular users alone already fill every BS
    assert modes.intra.alpha == 1.0 == modes.shared.alpha


def test_multiop_ratio():
    assert multiop_ratio(4 * LB, LB) == pytest.approx(2 / 3)
    assert multiop_ratio(0.0, LB) == 0.0
    assert multiop_ratio(LB, 0.0) == 1.0
    with pytest.raises(BothZero):
        multiop_ratio(0.0, 0.0)
