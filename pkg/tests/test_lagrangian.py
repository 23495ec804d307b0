from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracdyn.dimension import ExponentExpr
from fracdyn.lagrangian import (
    EmbeddingSpec,
    GeneralLagrangian,
    LaurentLagrangian,
    LaurentTerm,
    Method,
    NaturalLagrangian,
    action,
    check_coherence,
    check_fracconst_equivalence,
    check_method_equivalence,
    discrete_action,
    discrete_action_gradient,
    el_residual_classical,
    el_residual_fractional,
    embedded_system,
    embedding_report,
    fractional_constants,
    nondimensionalize,
)
from fracdyn.trajectory import SampledTrajectory


def oscillator(m: float = 1.0, k: float = 1.0, interval=(0.0, 5.0), x0_ref=None) -> NaturalLagrangian:
    return NaturalLagrangian(m, lambda x: 0.5 * k * x * x, lambda x: k * x, interval, x0_ref)


def free_particle(m: float = 1.0) -> NaturalLagrangian:
    return NaturalLagrangian(m, lambda x: 0.0 * x, lambda x: 0.0 * x)


def quadratic() -> GeneralLagrangian:
    return GeneralLagrangian(lambda x, v, t: 0.5 * v * v, lambda x, v, t: 0.0 * x, lambda x, v, t: v)


def forced() -> GeneralLagrangian:
    return GeneralLagrangian(
        lambda x, v, t: 0.5 * v * v - x * np.sin(t),
        lambda x, v, t: -np.sin(t) + 0.0 * x,
        lambda x, v, t: v,
        (0.0, 2.0),
    )


def smooth(a: float = 0.0, b: float = 2.0, n: int = 400) -> SampledTrajectory:
    return SampledTrajectory.sample(lambda t: np.exp(-t) + 0.3 * np.sin(2 * t), a, b, n)


# ---------------------------------------------------------------------------
# construction and nondimensionalization


def test_validation():
    with pytest.raises(ValueError):
        NaturalLagrangian(0.0, abs, abs)
    with pytest.raises(ValueError):
        GeneralLagrangian(None, None, None, (1.0, 1.0))
    with pytest.raises(ValueError):
        EmbeddingSpec(Method.HOMOGENEOUS, 1.0, 2.0)
    with pytest.raises(ValueError):
        EmbeddingSpec(Method.HOMOGENEOUS, 0.5, 0.0)
    assert EmbeddingSpec("nondim", 0.5).method is Method.NONDIM


@given(
    st.floats(0.1, 10), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 5), st.floats(0.1, 5), st.floats(0.1, 5)
)
def test_nondimensionalize_round_trip(tau, x, v, t, m, k):
    L = NaturalLagrangian(m, lambda x: 0.5 * k * x * x, lambda x: k * x)
    Lg, Ln = L.general(), nondimensionalize(L, tau)
    assert Ln.L(x, tau * v, t / tau) == pytest.approx(Lg.L(x, v, t), rel=1e-12, abs=1e-12)
    assert Ln.d1(x, tau * v, t / tau) == pytest.approx(Lg.d1(x, v, t), rel=1e-12, abs=1e-12)
    assert Ln.d2(x, tau * v, t / tau) == pytest.approx(Lg.d2(x, v, t) / tau, rel=1e-12, abs=1e-12)


@given(st.floats(0.1, 10), st.floats(-5, 5), st.floats(-5, 5))
def test_nondim_oscillator_form(tau, x, y):
    Ln = nondimensionalize(oscillator(m=2.0, k=3.0), tau)
    assert Ln.L(x, y, 0.0) == pytest.approx(2.0 / (2 * tau**2) * y * y - 1.5 * x * x, rel=1e-12, abs=1e-12)


def test_nondim_interval_and_unit_tau():
    Ln = nondimensionalize(oscillator(interval=(1.0, 5.0)), 2.0)
    assert Ln.interval == (0.5, 2.5)
    L1 = nondimensionalize(oscillator(interval=(1.0, 5.0)), 1.0)
    assert L1.interval == (1.0, 5.0)
    assert L1.L(0.3, 0.7, 0.0) == oscillator().general().L(0.3, 0.7, 0.0)


# ---------------------------------------------------------------------------
# classical residual and action


def test_classical_residual_second_order():
    errs = []
    for n in (200, 400, 800):
        x = SampledTrajectory.sample(np.cos, 0.0, 5.0, n)
        errs.append(float(np.max(np.abs(el_residual_classical(oscillator(), x).values[1:-1]))))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.1)


def test_free_particle_residuals():
    c = SampledTrajectory(0.0, 0.01, np.full(100, 2.5))
    assert np.all(el_residual_classical(free_particle(), c).values == 0.0)
    line = SampledTrajectory.sample(lambda t: 3.0 * t, 0.0, 1.0, 100)
    assert np.max(np.abs(el_residual_classical(free_particle(), line).values)) <= 1e-9


def test_action_examples():
    one = GeneralLagrangian(lambda x, v, t: 1.0 + 0.0 * x, None, None, (0.0, 3.0))
    assert action(one, None, SampledTrajectory.sample(np.sin, 0.0, 3.0, 50)) == pytest.approx(3.0, abs=1e-12)
    line = SampledTrajectory.sample(lambda t: 2.0 * t, 0.0, 1.0, 100)
    assert action(free_particle(m=3.0), None, line) == pytest.approx(0.5 * 3.0 * 4.0, rel=1e-12)
    period = SampledTrajectory.sample(np.cos, 0.0, 2 * math.pi, 2000)
    assert abs(action(oscillator(), None, period)) <= 1e-5


def test_action_is_stationary_on_classical_extremal():
    L = oscillator(interval=(0.0, 1.0))
    scaled = []
    for n in (20, 40, 80):
        x = SampledTrajectory.sample(np.cos, 0.0, 1.0, n)
        scaled.append(float(np.max(np.abs(discrete_action_gradient(L, x)))) / x.h)
    # gradient / h is the discrete Euler-Lagrange residual: O(h^2)
    assert scaled[0] / scaled[1] == pytest.approx(4, rel=0.1)
    assert scaled[1] / scaled[2] == pytest.approx(4, rel=0.1)
    x = SampledTrajectory.sample(np.cos, 0.0, 1.0, 40)
    off = x.with_values(x.values + 0.1 * np.sin(math.pi * x.t))
    assert np.max(np.abs(discrete_action_gradient(L, off))) / x.h > 0.1


def test_discrete_action_matches_trapezoid_action():
    x = SampledTrajectory.sample(np.cos, 0.0, 2 * math.pi, 2000)
    assert discrete_action(oscillator(), x) == pytest.approx(action(oscillator(), None, x), abs=1e-5)


# ---------------------------------------------------------------------------
# fractional residuals


def test_reduced_and_nested_agree_below_half():
    # for 2*alpha < 1 both are L1 schemes; nesting two alpha-derivatives of a
    # function vanishing at a agrees with the 2*alpha derivative in the limit
    L = oscillator(interval=(0.0, 1.0))
    spec = EmbeddingSpec(Method.HOMOGENEOUS, 0.4, 2.0)
    x = SampledTrajectory.sample(lambda t: t**2, 0.0, 1.0, 2000)
    reduced = el_residual_fractional(L, spec, x, form="reduced").values
    nested = el_residual_fractional(L, spec, x, form="nested").values
    assert np.max(np.abs(reduced[200:] - nested[200:])) <= 2e-2


def test_general_and_reduced_forms_match_for_quadratic_lagrangian():
    L = oscillator(interval=(0.0, 2.0))
    spec = EmbeddingSpec(Method.HOMOGENEOUS, 0.6, 1.5)
    x = smooth()
    Lg, D = embedded_system(L, spec)
    v = D(x).values
    literal = Lg.d1(x.values, v, x.t) - D(x.with_values(Lg.d2(x.values, v, x.t))).values
    nested = el_residual_fractional(L, spec, x, form="nested").values
    assert np.max(np.abs(literal - nested)) <= 1e-12 * np.max(np.abs(literal))


def test_reduced_form_requires_natural():
    with pytest.raises(TypeError):
        el_residual_fractional(quadratic(), EmbeddingSpec(Method.HOMOGENEOUS, 0.5), smooth(), form="reduced")
    with pytest.raises(ValueError):
        el_residual_fractional(oscillator(), EmbeddingSpec(Method.HOMOGENEOUS, 0.5), smooth(), form="x")


def test_fracconst_needs_laurent_form():
    with pytest.raises(TypeError):
        embedded_system(quadratic(), EmbeddingSpec(Method.FRACCONST, 0.5, 2.0))


def test_order_near_one_recovers_classical_residual():
    L = oscillator(interval=(0.0, 2.0))
    x = smooth(n=2000)
    classical = el_residual_classical(L, x).values
    frac = el_residual_fractional(L, EmbeddingSpec(Method.HOMOGENEOUS, 0.999, 3.0), x, form="nested").values
    assert np.max(np.abs(frac[200:-2] - classical[199:-1])) <= 2e-2


def test_mittag_leffler_residual_converges():
    from fracdyn.oscillator import OscillatorConfig, closed_form, settled_max

    errs = []
    for n in (500, 1000, 2000):
        cfg = OscillatorConfig(n=n)
        xh = closed_form(cfg, "homogeneous")
        spec = EmbeddingSpec(Method.HOMOGENEOUS, cfg.alpha, cfg.tau)
        errs.append(settled_max(el_residual_fractional(cfg.lagrangian(), spec, xh, v0=0.0)))
    assert errs[0] > errs[1] > errs[2]
    assert math.log2(errs[1] / errs[2]) >= 1.3


# ---------------------------------------------------------------------------
# fractional constants


def test_fractional_constants_natural():
    L = oscillator(m=2.0, k=3.0, x0_ref=0.5).laurent()
    consts = dict(fractional_constants(L, 0.75, 2.0))
    assert consts[0] == pytest.approx(0.5 * 3.0 * 0.25)
    assert consts[2] == pytest.approx(2.0 * 2.0 ** (2 * (0.75 - 1)))


def test_fractional_constants_oscillator_reference():
    # with V(x0) = k the potential constant equals the stiffness
    L = oscillator(k=3.0, x0_ref=math.sqrt(2)).laurent()
    assert dict(fractional_constants(L, 0.5, 4.0))[0] == pytest.approx(3.0)


def test_fractional_constants_unit_tau():
    L = oscillator(m=2.0, x0_ref=1.0).laurent()
    assert [a for _, a in fractional_constants(L, 0.3, 1.0)] == [tm.a for tm in L.terms]


def test_laurent_split_validation():
    with pytest.raises(ValueError):
        oscillator(x0_ref=0.0).laurent()
    with pytest.raises(ValueError):
        fractional_constants(oscillator().laurent(), 1.0, 2.0)


@given(st.integers(-3, 4), st.integers(-4, 2))
def test_dimension_bookkeeping(i, n0):
    alpha = ExponentExpr.symbol("a")
    assert alpha.scale(i) + n0 == ExponentExpr(i + n0) + (alpha - 1).scale(i)


def test_coefficient_dimensions():
    dims = oscillator().laurent().coefficient_dimensions()
    alpha = ExponentExpr.symbol("a")
    assert dims == [(0, ExponentExpr(-2), ExponentExpr(-2)), (2, ExponentExpr(0), alpha.scale(2) - 2)]


# ---------------------------------------------------------------------------
# equivalence checks


def test_method_equivalence_unit_tau_is_bit_exact():
    rep = check_method_equivalence(oscillator(), 0.75, 1.0, smooth())
    assert rep.max_residual_gap == 0.0


@given(st.floats(0.1, 0.9), st.floats(0.2, 5.0))
def test_method_equivalence_on_non_solutions(alpha, tau):
    rep = check_method_equivalence(oscillator(interval=(0.0, 2.0)), alpha, tau, smooth(n=200))
    assert np.max(np.abs(rep.first.values[1:])) > 1e-3
    assert rep.relative_gap <= 1e-10


@given(st.floats(0.1, 0.9), st.floats(0.2, 5.0))
def test_fracconst_identity(alpha, tau):
    L = oscillator(m=1.3, k=0.7, interval=(0.0, 2.0), x0_ref=1.0)
    assert check_fracconst_equivalence(L, alpha, tau, smooth(n=200)).relative_gap <= 1e-12


def test_fracconst_free_particle_and_unit_tau():
    x = smooth(n=200)
    assert check_fracconst_equivalence(free_particle(), 0.5, 3.0, x).relative_gap <= 1e-12
    assert check_fracconst_equivalence(oscillator(), 0.5, 1.0, x).relative_gap <= 1e-12


def test_fracconst_accepts_explicit_laurent():
    L = LaurentLagrangian(
        (
            LaurentTerm(1, 0.5, lambda x, t: np.sin(x), lambda x, t: np.cos(x)),
            LaurentTerm(2, 2.0, lambda x, t: 0.5 + 0.0 * x, lambda x, t: 0.0 * x),
        ),
        n0=-2,
        interval=(0.0, 2.0),
    )
    assert check_fracconst_equivalence(L, 0.4, 2.5, smooth(n=200)).relative_gap <= 1e-12


@pytest.mark.parametrize("method", [Method.NONDIM, Method.HOMOGENEOUS, Method.INHOMOGENEOUS_DIRECT])
@pytest.mark.parametrize("make", [oscillator, quadratic, forced])
def test_coherence(method, make):
    rep = check_coherence(make(), EmbeddingSpec(method, 0.6, 1.7), smooth(n=200))
    assert rep.relative_gap <= 1e-12


def test_embedding_report_json():
    spec = EmbeddingSpec(Method.NONDIM, 0.5, 2.0)
    rep = embedding_report(oscillator(), spec, smooth(0.0, 2.5, 100))
    assert set(rep) == {"method", "alpha", "tau", "interval", "residual_max", "residual_l2", "grid"}
    assert rep["interval"] == [0.0, 2.5]
    assert rep["grid"]["n"] == 101
    assert json.loads(json.dumps(rep)) == rep
