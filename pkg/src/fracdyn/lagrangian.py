"""Lagrangian embeddings, Euler-Lagrange residuals and the equivalence checks.

Three homogeneous ways to make a Lagrangian system fractional are supported,
plus the direct (dimensionally inconsistent) one for comparison:

* ``NONDIM``: rewrite in the dimensionless time ``u = t/tau`` and use
  ``d^alpha/du^alpha``;
* ``HOMOGENEOUS``: keep real time, use ``tau^(alpha-1) d^alpha/dt^alpha``;
* ``FRACCONST``: absorb ``tau`` into the Laurent coefficients of ``L``;
* ``INHOMOGENEOUS_DIRECT``: plain ``d^alpha/dt^alpha``.

All callables act elementwise on numpy arrays. Partial derivatives are
supplied by the caller and never approximated here.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from fracdyn.dimension import ExponentExpr
from fracdyn.fractops import CaputoSpec, caputo
from fracdyn.trajectory import SampledTrajectory

__all__ = [
    "GeneralLagrangian",
    "NaturalLagrangian",
    "LaurentTerm",
    "LaurentLagrangian",
    "Method",
    "EmbeddingSpec",
    "nondimensionalize",
    "el_residual_classical",
    "el_residual_fractional",
    "embed_operator",
    "action",
    "discrete_action",
    "discrete_action_gradient",
    "fractional_constants",
    "EquivalenceReport",
    "check_method_equivalence",
    "check_fracconst_equivalence",
    "check_coherence",
    "embedding_report",
]

Array = np.ndarray
Fn3 = Callable[[Array, Array, Array], Array]
Operator = Callable[[SampledTrajectory], SampledTrajectory]


@dataclass(frozen=True)
class GeneralLagrangian:
    L: Fn3
    d1: Fn3
    d2: Fn3
    interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self) -> None:
        a, b = self.interval
        if not b > a:
            raise ValueError(f"interval must satisfy a < b, got {self.interval}")


@dataclass(frozen=True)
class NaturalLagrangian:
    """``L(x, v) = m v^2 / 2 - V(x)``."""

    m: float
    V: Callable[[Array], Array]
    dV: Callable[[Array], Array]
    interval: tuple[float, float] = (0.0, 1.0)
    x0_ref: float | None = None

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m}")
        a, b = self.interval
        if not b > a:
            raise ValueError(f"interval must satisfy a < b, got {self.interval}")

    def general(self) -> GeneralLagrangian:
        m, V, dV = self.m, self.V, self.dV
        return GeneralLagrangian(
            L=lambda x, v, t: 0.5 * m * v * v - V(x),
            d1=lambda x, v, t: -dV(x),
            d2=lambda x, v, t: m * v,
            interval=self.interval,
        )

    def laurent(self) -> LaurentLagrangian:
        """Laurent form with ``a_2 = m``, ``f_2 = 1/2`` and potential term ``a_0 f_0 = -V``.

        With ``x0_ref`` set (and ``V(x0_ref) != 0``) the potential is split as
        ``a_0 = V(x0_ref)``, ``f_0 = -V/V(x0_ref)``; otherwise ``a_0 = 1``.
        """
        v0 = 1.0
        if self.x0_ref is not None:
            v0 = float(self.V(np.asarray(self.x0_ref, dtype=float)))
            if v0 == 0.0:
                raise ValueError("V(x0_ref) must be nonzero")
        V, dV = self.V, self.dV
        return LaurentLagrangian(
            terms=(
                LaurentTerm(0, v0, lambda x, t: -V(x) / v0, lambda x, t: -dV(x) / v0),
                LaurentTerm(2, self.m, _half, _zero),
            ),
            n0=-2,
            interval=self.interval,
        )


def _half(x: Array, t: Array) -> Array:
    return np.full_like(np.asarray(x, dtype=float), 0.5)


def _zero(x: Array, t: Array) -> Array:
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LaurentTerm:
    """``a * f(x, t) * v**i``; ``df`` is the partial of ``f`` in ``x``."""

    i: int
    a: float
    f: Callable[[Array, Array], Array]
    df: Callable[[Array, Array], Array]


@dataclass(frozen=True)
class LaurentLagrangian:
    terms: tuple[LaurentTerm, ...]
    n0: int = -2
    interval: tuple[float, float] = (0.0, 1.0)

    def general(self) -> GeneralLagrangian:
        terms = self.terms

        def L(x, v, t):
            return sum(tm.a * tm.f(x, t) * v**tm.i for tm in terms)

        def d1(x, v, t):
            return sum(tm.a * tm.df(x, t) * v**tm.i for tm in terms)

        def d2(x, v, t):
            return sum(tm.i * tm.a * tm.f(x, t) * v ** (tm.i - 1) for tm in terms if tm.i != 0) + 0.0 * x

        return GeneralLagrangian(L, d1, d2, self.interval)

    def fractional(self, alpha: float, tau: float) -> LaurentLagrangian:
        """The Lagrangian built from the fractional constants."""
        terms = tuple(
            LaurentTerm(tm.i, abar, tm.f, tm.df)
            for tm, (_, abar) in zip(self.terms, fractional_constants(self, alpha, tau))
        )
        return LaurentLagrangian(terms, self.n0, self.interval)

    def coefficient_dimensions(self, order_symbol: str = "a") -> list[tuple[int, ExponentExpr, ExponentExpr]]:
        """Per term: (i, temporal exponent of a_i, temporal exponent of the fractional constant)."""
        alpha = ExponentExpr.symbol(order_symbol)
        return [(tm.i, ExponentExpr(tm.i + self.n0), alpha.scale(tm.i) + self.n0) for tm in self.terms]


class Method(enum.Enum):
    NONDIM = "nondim"
    HOMOGENEOUS = "homogeneous"
    FRACCONST = "fracconst"
    INHOMOGENEOUS_DIRECT = "inhomogeneous"


@dataclass(frozen=True)
class EmbeddingSpec:
    method: Method
    alpha: float
    tau: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.method, Method):
            object.__setattr__(self, "method", Method(self.method))
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


AnyLagrangian = Union[GeneralLagrangian, NaturalLagrangian, LaurentLagrangian]


def _general(L: AnyLagrangian) -> GeneralLagrangian:
    return L if isinstance(L, GeneralLagrangian) else L.general()


def nondimensionalize(L: AnyLagrangian, tau: float) -> GeneralLagrangian:
    """``L_n(x, y, u) = L(x, y/tau, tau*u)`` on ``(a/tau, b/tau)``."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    Lg = _general(L)
    a, b = Lg.interval
    return GeneralLagrangian(
        L=lambda x, y, u: Lg.L(x, y / tau, tau * u),
        d1=lambda x, y, u: Lg.d1(x, y / tau, tau * u),
        d2=lambda x, y, u: Lg.d2(x, y / tau, tau * u) / tau,
        interval=(a / tau, b / tau),
    )


def _fractional_operator(alpha: float, prefactor: float = 1.0) -> Operator:
    def op(y: SampledTrajectory) -> SampledTrajectory:
        d = caputo(alpha, y)
        return d if prefactor == 1.0 else d.with_values(prefactor * d.values)

    return op


def _classical_operator(y: SampledTrajectory) -> SampledTrajectory:
    return y.with_values(np.gradient(y.values, y.h, edge_order=2))


def embedded_system(L: AnyLagrangian, spec: EmbeddingSpec) -> tuple[GeneralLagrangian, Operator]:
    """The Lagrangian and derivative operator each method embeds with.

    For ``NONDIM`` trajectories live on the ``u = t/tau`` grid.
    """
    alpha, tau = spec.alpha, spec.tau
    if spec.method is Method.NONDIM:
        return nondimensionalize(L, tau), _fractional_operator(alpha)
    if spec.method is Method.HOMOGENEOUS:
        return _general(L), _fractional_operator(alpha, tau ** (alpha - 1.0))
    if spec.method is Method.INHOMOGENEOUS_DIRECT:
        return _general(L), _fractional_operator(alpha)
    if isinstance(L, NaturalLagrangian):
        L = L.laurent()
    if not isinstance(L, LaurentLagrangian):
        raise TypeError("the fractional-constants method needs a Laurent-form Lagrangian")
    return L.fractional(alpha, tau).general(), _fractional_operator(alpha)


def el_residual_classical(L: AnyLagrangian, x: SampledTrajectory) -> SampledTrajectory:
    """``d1 L - d/dt d2 L`` with central differences, on the interior nodes."""
    from fracdyn.errors import TooFewSamples

    if x.n < 3:
        raise TooFewSamples("classical residual needs at least 3 samples")
    Lg = _general(L)
    t = x.t
    v = np.gradient(x.values, x.h, edge_order=2)
    p = Lg.d2(x.values, v, t)
    dp = np.gradient(p, x.h)
    r = Lg.d1(x.values, v, t) - dp
    return SampledTrajectory(x.t0 + x.h, x.h, r[1:-1])


def _reduced_residual(
    L: NaturalLagrangian, spec: EmbeddingSpec, x: SampledTrajectory, v0: float | None
) -> Array:
    alpha, tau = spec.alpha, spec.tau
    mu = 2.0 * alpha
    d2a = caputo(CaputoSpec(mu, v0=v0 if mu > 1.0 else None), x).values
    if spec.method is Method.NONDIM:
        coef = L.m / tau**2
    elif spec.method is Method.INHOMOGENEOUS_DIRECT:
        coef = L.m
    else:
        coef = L.m * tau ** (2.0 * (alpha - 1.0))
    return -L.dV(x.values) - coef * d2a


def el_residual_fractional(
    L: AnyLagrangian,
    spec: EmbeddingSpec,
    x: SampledTrajectory,
    form: str = "auto",
    v0: float | None = None,
) -> SampledTrajectory:
    """Residual ``d1 L(x, Dx, t) - D d2 L(x, Dx, t)`` of the method's causal
    Euler-Lagrange equation.

    ``form="nested"`` applies the operator twice, literally. ``form="reduced"``
    (natural Lagrangians only) collapses ``D(m D x)`` into one Caputo
    derivative of order ``2*alpha``, which is the equation the Mittag-Leffler
    closed forms solve. ``"auto"`` picks reduced for natural Lagrangians.
    ``v0`` is the known initial slope used by the reduced form when
    ``2*alpha > 1``. The value at the lower terminal is not meaningful.
    """
    if form not in ("auto", "nested", "reduced"):
        raise ValueError(f"unknown residual form {form!r}")
    if form == "reduced" or (form == "auto" and isinstance(L, NaturalLagrangian)):
        if not isinstance(L, NaturalLagrangian):
            raise TypeError("the reduced form applies to natural Lagrangians only")
        return x.with_values(_reduced_residual(L, spec, x, v0))
    Lg, D = embedded_system(L, spec)
    t = x.t
    v = D(x).values
    p = x.with_values(Lg.d2(x.values, v, t))
    return x.with_values(Lg.d1(x.values, v, t) - D(p).values)


def embed_operator(
    terms: Sequence[tuple[Callable, Callable]], D: Operator, x: SampledTrajectory, k: int = 1
) -> SampledTrajectory:
    """Embed ``sum_i f_i * (d/dt)^i o g_i`` by replacing ``d/dt`` with ``D``.

    ``f_i`` and ``g_i`` take ``(jets, t)`` with ``jets = [x, Dx, ..., D^k x]``.
    """
    jets = [x.values]
    cur = x
    for _ in range(k):
        cur = D(cur)
        jets.append(cur.values)
    t = x.t
    total = np.zeros(x.n)
    for i, (f, g) in enumerate(terms):
        y = x.with_values(np.asarray(g(jets, t), dtype=float) + np.zeros(x.n))
        for _ in range(i):
            y = D(y)
        total = total + f(jets, t) * y.values
    return x.with_values(total)


def action(L: AnyLagrangian, spec: EmbeddingSpec | None, x: SampledTrajectory) -> float:
    """Trapezoidal action of the (embedded) Lagrangian along ``x``."""
    if spec is None:
        Lg, D = _general(L), _classical_operator
    else:
        Lg, D = embedded_system(L, spec)
    integrand = Lg.L(x.values, D(x).values, x.t) + np.zeros(x.n)
    return float(np.trapezoid(integrand, dx=x.h))


def discrete_action(L: AnyLagrangian, x: SampledTrajectory) -> float:
    """Midpoint-rule action ``h * sum L((x_j + x_{j+1})/2, (x_{j+1} - x_j)/h, t_j + h/2)``.

    Unlike :func:`action` this sum has no one-sided boundary stencils, so its
    gradient in the interior samples is ``h`` times a consistent discrete
    Euler-Lagrange residual.
    """
    Lg = _general(L)
    y = x.values
    mid = 0.5 * (y[1:] + y[:-1])
    v = np.diff(y) / x.h
    t = x.t[:-1] + 0.5 * x.h
    return float(x.h * np.sum(Lg.L(mid, v, t) + np.zeros(mid.size)))


def discrete_action_gradient(L: AnyLagrangian, x: SampledTrajectory, eps: float = 1e-6) -> Array:
    """Central-difference gradient of :func:`discrete_action` with respect to
    the interior sample values (endpoints held fixed)."""
    base = np.array(x.values)
    grad = np.zeros(x.n - 2)
    for j in range(1, x.n - 1):
        up, dn = base.copy(), base.copy()
        up[j] += eps
        dn[j] -= eps
        grad[j - 1] = (discrete_action(L, x.with_values(up)) - discrete_action(L, x.with_values(dn))) / (2 * eps)
    return grad


def fractional_constants(L: LaurentLagrangian, alpha: float, tau: float) -> list[tuple[int, float]]:
    """``abar_i = a_i * tau**(i*(alpha-1))`` for each stored term."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return [(tm.i, tm.a * tau ** (tm.i * (alpha - 1.0))) for tm in L.terms]


# ---------------------------------------------------------------------------
# equivalence checks


@dataclass
class EquivalenceReport:
    max_residual_gap: float
    #: gap divided by the magnitude of the residual's constituent terms
    relative_gap: float
    first: SampledTrajectory
    second: SampledTrajectory
    extra: dict = field(default_factory=dict)


def _compare(r1: Array, r2: Array, scale: float) -> tuple[float, float]:
    gap = float(np.max(np.abs(r1[1:] - r2[1:]))) if r1.size > 1 else 0.0
    return gap, (gap / scale if scale > 0 else gap)


def _nested_parts(Lg: GeneralLagrangian, D: Operator, x: SampledTrajectory) -> tuple[Array, Array]:
    t = x.t
    v = D(x).values
    first = Lg.d1(x.values, v, t) + np.zeros(x.n)
    second = D(x.with_values(Lg.d2(x.values, v, t) + np.zeros(x.n))).values
    return first, second


def _scale(*parts: Array) -> float:
    return max(float(np.max(np.abs(p[1:]))) for p in parts)


def check_method_equivalence(
    L: AnyLagrangian, alpha: float, tau: float, x: SampledTrajectory
) -> EquivalenceReport:
    """Homogeneous-derivative residual on ``x(t)`` against the nondimensional
    residual on ``x~(u) = x(u*tau)``, compared node by node."""
    Lh, Dh = embedded_system(L, EmbeddingSpec(Method.HOMOGENEOUS, alpha, tau))
    Ln, Dn = embedded_system(L, EmbeddingSpec(Method.NONDIM, alpha, tau))
    h1, h2 = _nested_parts(Lh, Dh, x)
    n1, n2 = _nested_parts(Ln, Dn, x.rescaled(tau))
    r_h, r_n = h1 - h2, n1 - n2
    gap, rel = _compare(r_h, r_n, _scale(h1, h2))
    return EquivalenceReport(gap, rel, x.with_values(r_h), x.rescaled(tau).with_values(r_n))


def check_fracconst_equivalence(
    L: LaurentLagrangian | NaturalLagrangian, alpha: float, tau: float, x: SampledTrajectory
) -> EquivalenceReport:
    """Residual built term by term from the fractional constants with plain
    ``d^alpha/dt^alpha`` against the homogeneous-derivative residual of ``L``."""
    if isinstance(L, NaturalLagrangian):
        L = L.laurent()
    t = x.t
    v = caputo(alpha, x).values
    first = np.zeros(x.n)
    second = np.zeros(x.n)
    for i, abar in fractional_constants(L, alpha, tau):
        tm = next(tm for tm in L.terms if tm.i == i)
        first = first + abar * tm.df(x.values, t) * v**i
        if i != 0:
            inner = x.with_values(tm.f(x.values, t) * v ** (i - 1) + np.zeros(x.n))
            second = second + i * abar * caputo(alpha, inner).values
    r16 = first - second

    Lh, Dh = embedded_system(L, EmbeddingSpec(Method.HOMOGENEOUS, alpha, tau))
    h1, h2 = _nested_parts(Lh, Dh, x)
    gap, rel = _compare(r16, h1 - h2, _scale(first, second, h1, h2))
    return EquivalenceReport(gap, rel, x.with_values(r16), x.with_values(h1 - h2))


def check_coherence(L: AnyLagrangian, spec: EmbeddingSpec, x: SampledTrajectory) -> EquivalenceReport:
    """Euler-Lagrange equation of the embedded Lagrangian against the embedded
    classical Euler-Lagrange operator ``O((1, 1), (d1 L, -d2 L))``."""
    Lg, D = embedded_system(L, spec)
    p1, p2 = _nested_parts(Lg, D, x)
    r_el = p1 - p2

    one = lambda jets, t: 1.0  # noqa: E731
    terms = [
        (one, lambda jets, t: Lg.d1(jets[0], jets[1], t)),
        (one, lambda jets, t: -Lg.d2(jets[0], jets[1], t)),
    ]
    r_emb = embed_operator(terms, D, x).values
    gap, rel = _compare(r_el, r_emb, _scale(p1, p2))
    return EquivalenceReport(gap, rel, x.with_values(r_el), x.with_values(r_emb))


def embedding_report(L: AnyLagrangian, spec: EmbeddingSpec, x: SampledTrajectory) -> dict:
    """JSON-ready summary of a method's residual along ``x``."""
    r = el_residual_fractional(L, spec, x).values[1:]
    a, b = _general(L).interval
    if spec.method is Method.NONDIM:
        a, b = a / spec.tau, b / spec.tau
    return {
        "method": spec.method.value,
        "alpha": spec.alpha,
        "tau": spec.tau,
        "interval": [a, b],
        "residual_max": float(np.max(np.abs(r))),
        "residual_l2": float(math.sqrt(x.h * float(np.sum(r * r)))),
        "grid": {"h": x.h, "n": x.n},
    }
