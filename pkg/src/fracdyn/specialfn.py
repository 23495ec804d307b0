"""Gamma and one-parameter Mittag-Leffler functions on the real line."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from fracdyn.errors import NoConvergence, PoleError, PrecisionLoss

__all__ = ["gamma", "lgamma", "MLParams", "mittag_leffler", "mittag_leffler_array", "default_tol"]


def _check_pole(x: float) -> None:
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")


def gamma(x: float) -> float:
    """Gamma function; ``inf`` past the double range, PoleError at 0, -1, ..."""
    x = float(x)
    _check_pole(x)
    try:
        return math.gamma(x)
    except OverflowError:
        return math.inf


def lgamma(x: float) -> float:
    """``log|gamma(x)|``."""
    x = float(x)
    _check_pole(x)
    return math.lgamma(x)


def default_tol() -> float:
    """Default series tolerance; ``FRACDYN_TOL`` overrides it."""
    env = os.environ.get("FRACDYN_TOL")
    return float(env) if env else 1e-12


@dataclass(frozen=True)
class MLParams:
    lam: float
    tol: float = 1e-12
    max_terms: int = 500

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValueError(f"Mittag-Leffler parameter must be positive, got {self.lam}")
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


_UNIT_ROUNDOFF = 2.0**-53


@lru_cache(maxsize=8192)
def _coeff(lam: float, k: int) -> tuple[float, float]:
    """``(1/gamma(lam*k+1), lgamma(lam*k+1))``, zero reciprocal when it underflows."""
    x = lam * k + 1.0
    return (1.0 / gamma(x) if x < 170.0 else 0.0), lgamma(x)


def mittag_leffler(p: MLParams | float, z: float) -> float:
    r"""Evaluate :math:`E_\lambda(z) = \sum_k z^k / \Gamma(\lambda k + 1)` for real ``z``.

    Terms are accumulated with Neumaier's compensated summation. Summation
    stops once the next term is past the series peak and below
    ``tol * (1 + |partial sum|)``.

    Raises
    ------
    NoConvergence
        ``max_terms`` terms were used without meeting the stopping rule.
    PrecisionLoss
        Cancellation among terms (largest term times unit roundoff) exceeds
        the tolerance, so the plain series cannot deliver it.
    """
    if not isinstance(p, MLParams):
        p = MLParams(float(p))
    z = float(z)
    lam, tol = p.lam, p.tol
    if z == 0.0:
        return 1.0

    s = 0.0
    comp = 0.0
    peak = 0.0
    log_abs_z = math.log(abs(z))
    power = 1.0  # z**k by repeated multiplication while representable
    for k in range(p.max_terms):
        inv_g, lg_this = _coeff(lam, k)
        if inv_g != 0.0 and math.isfinite(power) and power != 0.0:
            term = power * inv_g
        else:
            log_mag = k * log_abs_z - lg_this
            if log_mag > 700.0:
                raise PrecisionLoss(f"E_{lam}({z}): series terms overflow")
            mag = math.exp(log_mag)
            term = mag if (z > 0 or k % 2 == 0) else -mag
        # Neumaier step
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        peak = max(peak, abs(term))

        total = s + comp
        threshold = tol * (1.0 + abs(total))
        log_next = (k + 1) * log_abs_z - _coeff(lam, k + 1)[1]
        log_this = k * log_abs_z - lg_this
        # log-concave terms: once decreasing they stay decreasing. The
        # 1e-3 margin keeps the whole tail, not just the next term, under tol.
        if log_next <= log_this and log_next < math.log(1e-3 * threshold):
            if peak * _UNIT_ROUNDOFF > threshold:
                raise PrecisionLoss(
                    f"E_{lam}({z}): largest term {peak:.3g} loses more than tol={tol:g} to rounding"
                )
            return total
        power *= z
    raise NoConvergence(f"E_{lam}({z}) did not converge in {p.max_terms} terms")


def mittag_leffler_array(p: MLParams | float, z) -> np.ndarray:
    """Elementwise :func:`mittag_leffler` over an array of arguments."""
    z = np.asarray(z, dtype=float)
    return np.array([mittag_leffler(p, v) for v in z.ravel()], dtype=float).reshape(z.shape)
