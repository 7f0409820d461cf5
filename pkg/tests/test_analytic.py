import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzsweep.analytic import (crossing_sine_probability, figure1a_data, figure1b_data, lz_classic,
                              lz_sine, sine_probability)
from lzsweep.errors import CrossingSingularityError, InputError
from lzsweep.numerics import TimeGrid


def test_classic_examples():
    assert lz_classic(0.0, 0.3) == 1.0
    assert lz_classic(0.1, 0.01) == pytest.approx(0.207880, abs=5e-7)
    assert lz_classic(0.1, 0.01) == math.exp(-math.pi / 2)
    assert abs(lz_classic(1.0, 1e6) - 1.0) <= 1e-5
    for bad in (0.0, -1.0):
        with pytest.raises(InputError):
            lz_classic(0.1, bad)


def test_sine_at_zero_both_modes():
    for mode in ("abs_rate", "literal_cos"):
        assert lz_sine(0.1, 1.0, 1.0, 0.0, mode) == pytest.approx(math.exp(-0.005 * math.pi), abs=1e-15)
    assert math.exp(-0.005 * math.pi) == pytest.approx(0.984415, abs=5e-7)


def test_sine_errors():
    with pytest.raises(CrossingSingularityError):
        lz_sine(0.1, 1.0, 1.0, math.pi / 2)
    with pytest.raises(InputError):
        lz_sine(0.1, 1.0, 1.0, math.pi, "literal_cos")
    with pytest.raises(InputError):
        lz_sine(0.1, 0.0, 1.0, 0.0)
    assert lz_sine(0.0, 1.0, 1.0, 0.3) == 1.0


@settings(max_examples=80, deadline=None)
@given(eps=st.floats(0, 2), a=st.floats(0.1, 5), w=st.floats(0.1, 5), t=st.floats(-10, 10))
def test_rate_matching_identity(eps, a, w, t):
    c = abs(math.cos(w * t))
    if c <= 1e-6:
        return
    assert abs(lz_sine(eps, a, w, t) - lz_classic(eps, a * w * c)) <= 1e-15


@settings(max_examples=50, deadline=None)
@given(e1=st.floats(0.01, 1), de=st.floats(0.01, 1), rate=st.floats(0.05, 5))
def test_decreasing_in_eps(e1, de, rate):
    assert lz_classic(e1 + de, rate) < lz_classic(e1, rate)
    assert lz_sine(e1 + de, rate, 1.0, 0.0) < lz_sine(e1, rate, 1.0, 0.0)


def test_crossing_value_is_the_peak_of_abs_rate_curve():
    # dense grid; the closed form is reached at t = k pi / omega and is the largest value
    for w in (1.0, 2.0):
        t = np.linspace(0, 2 * math.pi, 200_001)
        p = sine_probability(0.1, 1.0, w, t)
        closed = crossing_sine_probability(0.1, 1.0, w)
        assert abs(np.nanmax(p) - closed) <= 1e-9
        for k in range(int(2 * w) + 1):
            assert abs(lz_sine(0.1, 1.0, w, k * math.pi / w) - closed) <= 1e-12
        # near the turning points of the sweep the curve drops towards zero
        assert np.nanmin(p) < 0.1 * closed


def test_figure1a_examples():
    alphas, p = figure1a_data(0.1, 0.005, 0.05, 2)
    np.testing.assert_allclose(alphas, [0.005, 0.05], rtol=1e-15)
    np.testing.assert_allclose(p, [0.043214, 0.730403], atol=5e-7)
    _, p = figure1a_data(0.0, 0.001, 10, 20)
    np.testing.assert_array_equal(p, 1.0)
    alphas, p = figure1a_data(0.1, 0.001, 10, 50)
    assert np.all(np.diff(p) > 0)
    np.testing.assert_allclose(np.diff(np.log(alphas)), math.log(1e4) / 49, rtol=1e-10)


@pytest.mark.parametrize("args", [(0.1, 0.0, 1.0, 5), (0.1, 1.0, 0.5, 5), (0.1, 0.1, 1.0, 1),
                                  (-0.1, 0.1, 1.0, 5)])
def test_figure1a_validation(args):
    with pytest.raises(InputError):
        figure1a_data(*args)


def test_figure1b_table():
    t, cols = figure1b_data(0.1, 1.0, (1.0, 2.0), TimeGrid(0, 2 * math.pi, 628))
    assert cols.shape == (629, 2)
    assert cols[0, 0] == pytest.approx(math.exp(-0.005 * math.pi), abs=1e-15)
    assert cols[0, 1] == pytest.approx(math.exp(-0.0025 * math.pi), abs=1e-15)
    assert math.exp(-0.0025 * math.pi) == pytest.approx(0.992177, abs=5e-7)


def test_figure1b_missing_cells_only_in_their_column():
    # t = pi/4 is singular for omega = 2 only
    t, cols = figure1b_data(0.1, 1.0, (1.0, 2.0), [0.0, math.pi / 4])
    assert np.isnan(cols[1, 1]) and not np.isnan(cols[1, 0])
    _, lit = figure1b_data(0.1, 1.0, (1.0,), np.linspace(0, 2 * math.pi, 9), "literal_cos")
    cos = np.cos(np.linspace(0, 2 * math.pi, 9))
    assert np.all(np.isnan(lit[cos <= 1e-9, 0]))
    assert not np.any(np.isnan(lit[cos > 1e-9, 0]))


def test_figure1b_zero_coupling_and_validation():
    _, cols = figure1b_data(0.0, 1.0, (1.0, 3.0), [0.1, 1.0, 2.0])
    np.testing.assert_array_equal(cols, 1.0)
    with pytest.raises(InputError):
        figure1b_data(0.1, 1.0, (), [0.0])
