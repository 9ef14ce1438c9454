"""Channel draws: distribution, reproducibility, stream layout."""

import math

import numpy as np
import pytest
from scipy import stats

from crpool import ParameterError, RngSpec, draw_gains, stream_for
from crpool.channel import hook_stream_for


def test_same_spec_reproduces_identical_gains():
    a = draw_gains(256, RngSpec(42, 3))
    b = draw_gains(256, RngSpec(42, 3))
    assert np.array_equal(a.gains, b.gains)


def test_distinct_streams_differ():
    a = draw_gains(256, RngSpec(42, 3))
    b = draw_gains(256, RngSpec(42, 4))
    c = draw_gains(256, RngSpec(43, 3))
    assert not np.array_equal(a.gains, b.gains)
    assert not np.array_equal(a.gains, c.gains)


def test_stream_does_not_depend_on_sibling_draw_order():
    # Drawing stream 7 first or after stream 2 must not change it.
    first = draw_gains(32, RngSpec(1, 7)).gains
    draw_gains(32, RngSpec(1, 2))
    again = draw_gains(32, RngSpec(1, 7)).gains
    assert np.array_equal(first, again)


def test_gains_have_unit_mean():
    g = draw_gains(10**6, RngSpec(42, 0)).gains
    # SE of the mean is 1/sqrt(1e6); allow 3 standard errors.
    assert abs(g.mean() - 1.0) < 3e-3
    assert g.min() >= 0.0


def test_median_sits_at_ln2():
    g = draw_gains(10**6, RngSpec(42, 0)).gains
    frac = np.mean(g < math.log(2.0))
    assert abs(frac - 0.5) < 1.5e-3


def test_empirical_distribution_is_unit_exponential():
    g = draw_gains(10**5, RngSpec(42, 1)).gains
    ks = stats.kstest(g, "expon").statistic
    # 5% critical value of the one-sample KS statistic at this n.
    assert ks < 1.36 / math.sqrt(10**5)


def test_draw_requires_positive_band_count():
    with pytest.raises(ParameterError):
        draw_gains(0, RngSpec(1, 0))


def test_stream_layout_is_collision_free():
    seen = set()
    for trial in range(20):
        for role in (1, 2, 3, 5, 17):
            seen.add(stream_for(trial, role))
        seen.add(hook_stream_for(trial))
    assert len(seen) == 20 * 6


def test_hook_stream_is_reserved_role():
    assert hook_stream_for(5) == stream_for(5, 65000)


def test_stream_coordinates_are_validated():
    with pytest.raises(ParameterError):
        stream_for(-1, 1)
    with pytest.raises(ParameterError):
        stream_for(0, 65536)
