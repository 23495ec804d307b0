from __future__ import annotations

import math

import numpy as np
import pytest
from conftest import ml_oracle
from hypothesis import given
from hypothesis import strategies as st

from fracdyn.errors import NonFiniteValue, OrderOutOfRange
from fracdyn.fdesolver import FdeProblem, solve_abm


def decay(mu: float, n: int, b: float = 1.0) -> FdeProblem:
    return FdeProblem(mu, lambda t, x: -x, 1.0, 0.0 if mu > 1 else None, (0.0, b), n)


def test_validation():
    f = lambda t, x: -x  # noqa: E731
    with pytest.raises(OrderOutOfRange):
        FdeProblem(2.0, f, 1.0, 0.0)
    with pytest.raises(OrderOutOfRange):
        FdeProblem(0.0, f, 1.0)
    with pytest.raises(ValueError):
        FdeProblem(1.5, f, 1.0)
    with pytest.raises(ValueError):
        FdeProblem(0.5, f, 1.0, 0.0)
    with pytest.raises(ValueError):
        FdeProblem(0.5, f, 1.0, n=4)
    with pytest.raises(ValueError):
        FdeProblem(0.5, f, 1.0, interval=(1.0, 0.0))


def test_classical_limit():
    x = solve_abm(decay(1.0, 10_000))
    assert abs(x.values[-1] - math.exp(-1.0)) <= 1e-6


@pytest.mark.parametrize("mu", [0.5, 1.5])
def test_mittag_leffler_decay(mu):
    x = solve_abm(decay(mu, 1000))
    assert abs(x.values[-1] - float(ml_oracle(mu, -1.0))) <= 1e-3


@pytest.mark.parametrize("mu", [0.5, 0.8, 1.5])
def test_refinement_is_monotone(mu):
    exact = float(ml_oracle(mu, -1.0))
    errs = [abs(solve_abm(decay(mu, n)).values[-1] - exact) for n in (100, 200, 400)]
    assert errs[0] > errs[1] > errs[2]
    assert math.log2(errs[1] / errs[2]) >= min(2.0, 1.0 + mu) - 0.6


def test_initial_slope_enters_history():
    # D^1.5 x = 0 with x(0) = 1, x'(0) = 2 is solved by the line 1 + 2t
    x = solve_abm(FdeProblem(1.5, lambda t, x: 0.0 * x, 1.0, 2.0, (0.0, 1.0), 50))
    np.testing.assert_allclose(x.values, 1.0 + 2.0 * x.t, atol=1e-13)


def test_initial_value_is_kept():
    x = solve_abm(decay(0.7, 64))
    assert x.values[0] == 1.0
    assert x.n == 65


@given(st.floats(-10, 10).filter(lambda c: abs(c) > 1e-3), st.sampled_from([0.3, 0.9, 1.4]))
def test_linear_in_initial_data(c, mu):
    v0 = 0.0 if mu > 1 else None
    base = solve_abm(FdeProblem(mu, lambda t, x: -2.0 * x, 1.0, v0, (0.0, 1.0), 64)).values
    scaled = solve_abm(FdeProblem(mu, lambda t, x: -2.0 * x, c, v0, (0.0, 1.0), 64)).values
    np.testing.assert_allclose(scaled, c * base, rtol=1e-12, atol=1e-14)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blow_up_is_reported():
    with pytest.raises(NonFiniteValue):
        solve_abm(FdeProblem(0.5, lambda t, x: x**3, 10.0, interval=(0.0, 5.0), n=64))
