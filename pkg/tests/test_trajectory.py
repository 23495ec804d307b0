from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracdyn.errors import TooFewSamples
from fracdyn.trajectory import SampledTrajectory, parse_csv, read_csv, write_csv


def test_sample_grid():
    x = SampledTrajectory.sample(lambda t: t**2, 1.0, 2.0, 4)
    assert x.n == 5
    np.testing.assert_allclose(x.t, [1.0, 1.25, 1.5, 1.75, 2.0])
    assert x.t_end == 2.0


def test_validation():
    with pytest.raises(ValueError):
        SampledTrajectory(0.0, 0.0, [1.0, 2.0])
    with pytest.raises(TooFewSamples):
        SampledTrajectory(0.0, 0.1, [1.0])


def test_values_are_read_only():
    x = SampledTrajectory(0.0, 0.1, [1.0, 2.0])
    with pytest.raises(ValueError):
        x.values[0] = 3.0


def test_rescaled_keeps_samples():
    x = SampledTrajectory(2.0, 0.5, [1.0, 2.0, 3.0])
    y = x.rescaled(2.0)
    assert (y.t0, y.h) == (1.0, 0.25)
    assert y.values is x.values


def test_csv_header_and_format(tmp_path):
    x = SampledTrajectory(0.0, 0.1, [1.0, 1.0 / 3.0])
    text = write_csv(x, tmp_path / "x.csv")
    assert text.splitlines() == ["t,x", "0,1", "0.10000000000000001,0.33333333333333331"]
    assert (tmp_path / "x.csv").read_text() == text


@given(st.floats(-10, 10), st.floats(1e-3, 1.0), st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30))
def test_csv_round_trip_is_exact(t0, h, values):
    x = SampledTrajectory(t0, h, values)
    y = parse_csv(write_csv(x))
    np.testing.assert_array_equal(y.values, x.values)
    np.testing.assert_allclose(y.t, x.t, rtol=1e-12, atol=1e-12)


def test_non_uniform_grid_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,x\n0,1\n0.1,2\n0.3,3\n")
    with pytest.raises(ValueError, match="uniform"):
        read_csv(path)


def test_header_required():
    with pytest.raises(ValueError):
        parse_csv("0,1\n1,2\n")
