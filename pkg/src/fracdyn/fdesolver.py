"""Adams-Bashforth-Moulton predictor-corrector for Caputo equations ``D^mu x = f(t, x)``.

This is the product-trapezoidal scheme of Diethelm, Ford and Freed with a
single corrector pass. For ``mu = 1`` it is the classical Euler predictor with
a trapezoidal corrector.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from fracdyn.errors import NonFiniteValue, OrderOutOfRange
from fracdyn.specialfn import gamma
from fracdyn.trajectory import SampledTrajectory

__all__ = ["FdeProblem", "solve_abm"]


@dataclass(frozen=True)
class FdeProblem:
    """``D^mu x = f(t, x)`` on ``interval`` with ``n`` equal steps.

    ``v0`` is the initial slope and must be given exactly when ``mu > 1``.
    """

    mu: float
    f: Callable[[float, float], float]
    x0: float
    v0: float | None = None
    interval: tuple[float, float] = (0.0, 1.0)
    n: int = 1000

    def __post_init__(self) -> None:
        if not 0.0 < self.mu < 2.0:
            raise OrderOutOfRange(f"order must lie in (0, 2), got {self.mu}")
        if (self.mu > 1.0) != (self.v0 is not None):
            raise ValueError("v0 is required when mu > 1 and not accepted otherwise")
        a, b = self.interval
        if not b > a:
            raise ValueError(f"interval must satisfy a < b, got {self.interval}")
        if self.n < 8:
            raise ValueError(f"n must be at least 8, got {self.n}")


def solve_abm(p: FdeProblem) -> SampledTrajectory:
    mu, n = p.mu, p.n
    a, b = p.interval
    h = (b - a) / n
    t = a + h * np.arange(n + 1)
    history = p.x0 + (p.v0 or 0.0) * (t - a)

    k = np.arange(n + 1, dtype=float)
    # predictor weights b_k = (k+1)^mu - k^mu, indexed by k = step - j
    bw = (k + 1.0) ** mu - k**mu
    # corrector interior weights (k+2)^(mu+1) - 2(k+1)^(mu+1) + k^(mu+1)
    k1 = mu + 1.0
    aw = (k + 2.0) ** k1 - 2.0 * (k + 1.0) ** k1 + k**k1
    cp = h**mu / gamma(mu + 1.0)
    cc = h**mu / gamma(mu + 2.0)

    x = np.empty(n + 1)
    fv = np.empty(n + 1)
    x[0] = p.x0
    fv[0] = p.f(t[0], x[0])
    for s in range(n):
        # s is the current index, computing s+1
        pred = history[s + 1] + cp * float(np.dot(bw[s::-1], fv[: s + 1]))
        a0 = s**k1 - (s - mu) * (s + 1.0) ** mu
        corr = a0 * fv[0]
        if s >= 1:
            corr += float(np.dot(aw[s - 1 :: -1], fv[1 : s + 1]))
        val = history[s + 1] + cc * (p.f(t[s + 1], pred) + corr)
        if not math.isfinite(val):
            raise NonFiniteValue(f"solution became non-finite at t = {t[s + 1]!r}")
        x[s + 1] = val
        fv[s + 1] = p.f(t[s + 1], val)
    return SampledTrajectory(a, h, x)
