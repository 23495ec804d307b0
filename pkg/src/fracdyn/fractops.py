"""Caputo derivatives of uniformly sampled trajectories.

Orders in (0, 1) use the L1 scheme: ``x`` is taken piecewise linear and the
weakly singular kernel is integrated exactly, giving weights
``b_k = (k+1)^(1-mu) - k^(1-mu)``. Orders in (1, 2) apply the same
construction, at order ``mu - 1``, to second-order nodal estimates of ``x'``.
Both converge like ``h^(2 - frac(mu))`` on smooth data. The derivative at the
lower terminal is 0 by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracdyn.errors import OrderOutOfRange, TooFewSamples
from fracdyn.specialfn import gamma
from fracdyn.trajectory import SampledTrajectory

__all__ = [
    "CaputoSpec",
    "caputo",
    "homogeneous_caputo",
    "ScalingReport",
    "verify_scaling_condition",
    "l1_weights",
    "power_rule",
]


@dataclass(frozen=True)
class CaputoSpec:
    """Order ``mu``, an optional time constant and an optional initial slope.

    With ``tau`` set the result carries the prefactor ``tau**(mu - 1)``, so the
    operator has the dimension of a first derivative. ``v0`` (orders above 1
    only) is the known ``x'(t0)``; without it the slope at the terminal is
    estimated one-sidedly, which costs accuracy when ``x`` is not smooth there.
    """

    mu: float
    tau: float | None = None
    v0: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.mu < 2.0:
            raise OrderOutOfRange(f"Caputo order must lie in (0, 2), got {self.mu}")
        if self.tau is not None and not self.tau > 0:
            raise ValueError(f"time constant must be positive, got {self.tau}")
        if self.v0 is not None and self.mu <= 1.0:
            raise ValueError("an initial slope only applies to orders above 1")


def l1_weights(nu: float, count: int) -> np.ndarray:
    k = np.arange(count, dtype=float)
    return (k + 1.0) ** (1.0 - nu) - k ** (1.0 - nu)


def _l1(nu: float, h: float, y: np.ndarray) -> np.ndarray:
    """L1 approximation of the order-``nu`` Caputo derivative of nodal data ``y``."""
    dy = np.diff(y)
    b = l1_weights(nu, dy.size)
    out = np.zeros_like(y)
    out[1:] = np.convolve(b, dy)[: dy.size] * (h ** (-nu) / gamma(2.0 - nu))
    return out


def caputo(spec: CaputoSpec | float, x: SampledTrajectory) -> SampledTrajectory:
    """Left Caputo derivative of order ``spec.mu`` with terminal ``x.t0``.

    ``mu == 1`` falls back to second-order finite differences.
    """
    if not isinstance(spec, CaputoSpec):
        spec = CaputoSpec(float(spec))
    mu = spec.mu
    if x.n < 3:
        raise TooFewSamples(f"Caputo derivative needs at least 3 samples, got {x.n}")
    # shifting by x(a) keeps the one-sided stencils exact on constants
    shifted = x.values - x.values[0]
    if mu == 1.0:
        out = np.gradient(shifted, x.h, edge_order=2)
    elif mu < 1.0:
        out = _l1(mu, x.h, x.values)
    else:
        dx = np.gradient(shifted, x.h, edge_order=2)
        if spec.v0 is not None:
            dx[0] = spec.v0
        out = _l1(mu - 1.0, x.h, dx)
    if spec.tau is not None:
        out = out * spec.tau ** (mu - 1.0)
    return x.with_values(out)


def homogeneous_caputo(alpha: float, tau: float, x: SampledTrajectory) -> SampledTrajectory:
    """``tau**(alpha-1) * D^alpha x``: a fractional operator of dimension 1/time."""
    if not 0.0 < alpha < 1.0:
        raise OrderOutOfRange(f"alpha must lie in (0, 1), got {alpha}")
    return caputo(CaputoSpec(alpha, tau), x)


@dataclass
class ScalingReport:
    max_rel_error: float
    n_valid: int
    lhs: SampledTrajectory
    rhs: SampledTrajectory

    @property
    def note(self) -> str:
        return "no valid comparison nodes" if self.n_valid == 0 else ""


def verify_scaling_condition(alpha: float, tau: float, x: SampledTrajectory) -> ScalingReport:
    """Compare ``tau^alpha D_t^alpha x`` at ``t`` with ``D_u^alpha x~`` at ``u = t/tau``.

    ``x~(u) = x(u*tau)`` is the same samples on the grid ``(t0/tau, h/tau)``.
    The maximum relative error is taken over interior nodes where
    ``|lhs| > 1e-8``.
    """
    if not tau > 0:
        raise ValueError(f"time constant must be positive, got {tau}")
    lhs = caputo(alpha, x)
    lhs = lhs.with_values(tau**alpha * lhs.values)
    rhs = caputo(alpha, x.rescaled(tau))
    a, b = lhs.values[1:-1], rhs.values[1:-1]
    mask = np.abs(a) > 1e-8
    if not mask.any():
        return ScalingReport(0.0, 0, lhs, rhs)
    err = float(np.max(np.abs(a[mask] - b[mask]) / np.abs(a[mask])))
    return ScalingReport(err, int(mask.sum()), lhs, rhs)


def power_rule(p: float, mu: float, t: np.ndarray, a: float = 0.0) -> np.ndarray:
    """Exact Caputo derivative of ``(t-a)^p`` for ``p > mu - 1`` (``p`` not below ``ceil(mu)``)."""
    s = np.maximum(t - a, 0.0)
    if p == math.floor(p) and p < math.ceil(mu):
        return np.zeros_like(s)
    return gamma(p + 1.0) / gamma(p + 1.0 - mu) * s ** (p - mu)
