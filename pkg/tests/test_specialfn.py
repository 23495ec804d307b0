from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ml_oracle
from fracdyn.errors import NoConvergence, PoleError, PrecisionLoss
from fracdyn.specialfn import MLParams, default_tol, gamma, lgamma, mittag_leffler, mittag_leffler_array


def test_gamma_reference_values():
    assert gamma(1.0) == 1.0
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(1.5) == pytest.approx(0.8862269254527580, rel=1e-15)
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


@given(st.floats(min_value=1e-3, max_value=50.0))
def test_gamma_relative_error_against_mpmath(x):
    exact = float(mpmath.gamma(mpmath.mpf(x)))
    assert abs(gamma(x) - exact) <= 1e-13 * abs(exact)


@given(st.floats(min_value=-20.0, max_value=-1e-3).filter(lambda x: abs(x - round(x)) > 1e-6))
def test_gamma_reflection_against_mpmath(x):
    exact = float(mpmath.gamma(mpmath.mpf(x)))
    assert abs(gamma(x) - exact) <= 1e-12 * abs(exact)


@given(st.floats(min_value=1e-3, max_value=150.0))
def test_lgamma_against_mpmath(x):
    exact = float(mpmath.loggamma(mpmath.mpf(x)))
    assert abs(lgamma(x) - exact) <= 1e-13 * max(1.0, abs(exact))


def test_ml_at_zero():
    for lam in (0.3, 1.0, 1.5, 2.0):
        assert mittag_leffler(lam, 0.0) == 1.0


def test_ml_exponential_and_cosine():
    assert mittag_leffler(1.0, 1.0) == pytest.approx(math.e, abs=1e-14)
    assert abs(mittag_leffler(2.0, -((math.pi / 2) ** 2))) <= 1e-13


def test_ml_pinned_values():
    # 50-digit series oracle
    assert mittag_leffler(1.5, -1.0) == pytest.approx(ml_oracle(1.5, -1.0), abs=1e-14)
    assert ml_oracle(1.5, -1.0) == pytest.approx(0.3966293653, abs=1e-10)
    assert mittag_leffler(1.5, -math.sqrt(2.0)) == pytest.approx(ml_oracle(1.5, -math.sqrt(2.0)), abs=1e-14)


@given(st.floats(min_value=0.2, max_value=2.0), st.floats(min_value=-30.0, max_value=10.0))
def test_ml_matches_oracle_or_raises(lam, z):
    try:
        value = mittag_leffler(MLParams(lam), z)
    except (PrecisionLoss, NoConvergence):
        return
    exact = ml_oracle(lam, z, dps=60)
    assert abs(value - exact) <= 10 * 1e-12 * (1.0 + abs(exact))


def test_exp_grid():
    x = np.linspace(-5.0, 5.0, 100)
    err = np.abs(mittag_leffler_array(1.0, x) - np.exp(x))
    assert err.max() <= 10 * 1e-12 * np.exp(5.0)


def test_cos_grid():
    x = np.linspace(0.0, 10.0, 100)
    err = np.abs(mittag_leffler_array(2.0, -(x**2)) - np.cos(x))
    assert err.max() <= 10 * 1e-12


@given(st.sampled_from([0.5, 1.0, 1.25, 1.5, 1.75, 2.0]), st.floats(min_value=-20.0, max_value=0.0))
def test_nonpositive_argument_bounded_by_one(lam, z):
    try:
        value = mittag_leffler(lam, z)
    except (PrecisionLoss, NoConvergence):
        return
    assert value <= 1.0


def test_deterministic():
    a = mittag_leffler(1.3, -7.25)
    b = mittag_leffler(1.3, -7.25)
    assert a == b


def test_cancellation_is_reported():
    with pytest.raises(PrecisionLoss):
        mittag_leffler(1.0, -40.0)


def test_term_budget_is_enforced():
    with pytest.raises(NoConvergence):
        mittag_leffler(MLParams(2.0, max_terms=5), -9.0)


def test_params_validated():
    with pytest.raises(ValueError):
        MLParams(0.0)
    with pytest.raises(ValueError):
        MLParams(1.0, tol=0.0)


def test_tolerance_from_environment(monkeypatch):
    monkeypatch.setenv("FRACDYN_TOL", "1e-8")
    assert default_tol() == 1e-8
    monkeypatch.delenv("FRACDYN_TOL")
    assert default_tol() == 1e-12
