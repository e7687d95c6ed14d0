import numpy as np
import pytest
from hypothesis import given, strategies as st

from d2dshare import pathloss
from d2dshare.errors import NonPositiveDistance
from d2dshare.model import PathlossModel

D2D = PathlossModel(40.0, 28.0)
CELL = PathlossModel(37.6, 15.3)
models = st.builds(PathlossModel, st.floats(20.5, 60.0), st.floats(-20.0, 80.0))


def test_d2d_at_30m():
    assert pathloss.loss_db(D2D, 30.0) == pytest.approx(87.085, abs=5e-4)
    assert pathloss.gain(D2D, 30.0) == pytest.approx(10 ** (-8.70848501887865), rel=1e-12)


def test_cellular_at_200m():
    assert pathloss.loss_db(CELL, 200.0) == pytest.approx(101.819, abs=5e-4)


@given(models)
def test_unit_distance_gives_intercept(model):
    assert pathloss.loss_db(model, 1.0) == pytest.approx(model.intercept_db, abs=1e-12)
    assert pathloss.invert(model, model.intercept_db) == pytest.approx(1.0)


def test_invert_d2d():
    assert pathloss.invert(D2D, 92.0) == pytest.approx(10 ** (64 / 40), rel=1e-12)
    assert pathloss.invert(D2D, 92.0) == pytest.approx(39.81, abs=5e-3)


def test_nonpositive_distance():
    with pytest.raises(NonPositiveDistance):
        pathloss.gain(D2D, 0.0)
    with pytest.raises(NonPositiveDistance):
        pathloss.gain(D2D, np.array([1.0, -2.0]))


@given(models, st.floats(1.0, 1e4))
def test_round_trip(model, r):
    loss = pathloss.loss_db(model, r)
    assert pathloss.invert(model, loss) == pytest.approx(r, rel=1e-9)
    assert pathloss.loss_db(model, pathloss.invert(model, loss)) == pytest.approx(loss, abs=1e-9)


@given(models, st.floats(0.1, 1e4), st.floats(1.001, 10.0))
def test_monotone(model, r, factor):
    assert pathloss.gain(model, r * factor) < pathloss.gain(model, r)
    loss = pathloss.loss_db(model, r)
    assert pathloss.invert(model, loss + factor) > pathloss.invert(model, loss)


def test_relative_gain_is_power_law():
    assert pathloss.relative_gain(D2D, 60.0, 30.0) == pytest.approx(2.0**-4)
    r = np.array([10.0, 50.0, 300.0])
    np.testing.assert_allclose(
        pathloss.relative_gain(CELL, r, 30.0), pathloss.gain(CELL, r) / pathloss.gain(CELL, 30.0), rtol=1e-12
    )
