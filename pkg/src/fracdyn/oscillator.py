"""Harmonic oscillator and free-fall scenarios.

The embedded oscillator equations all have one-term Mittag-Leffler solutions
``x(a) * E_{2 alpha}(-c (t - a)^{2 alpha})``; the variants differ only in ``c``:

* ``nondim``: ``(omega tau)^2`` on the dimensionless grid ``u = t/tau``;
* ``homogeneous``: ``omega^2 tau^(2 (1 - alpha))``;
* ``inhomogeneous``: ``omega^2``, which leaves the argument with dimension
  ``T^(2 (alpha - 1))``.

For ``2 alpha > 1`` the second initial condition is ``x'(a) = 0``, the value
the one-term solution has.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from fracdyn.dimension import Dimension, HomogeneityVerdict, VerdictKind
from fracdyn.eqdsl import EquationDoc, check_homogeneity, infer_dimension, parse, parse_expr
from fracdyn.equations import load
from fracdyn.fdesolver import FdeProblem, solve_abm
from fracdyn.lagrangian import EmbeddingSpec, Method, NaturalLagrangian, el_residual_fractional
from fracdyn.specialfn import MLParams, default_tol, mittag_leffler_array
from fracdyn.trajectory import SampledTrajectory, write_csv

__all__ = [
    "VARIANTS",
    "OscillatorConfig",
    "ml_solution",
    "closed_form",
    "argument_dimensions",
    "ScenarioReport",
    "run_scenario",
    "FreeFallResult",
    "free_fall_scenario",
    "settled_max",
    "csv_name",
]

VARIANTS = ("nondim", "homogeneous", "inhomogeneous")

# Residuals are compared away from the lower terminal: the solutions behave
# like (t-a)^(2 alpha) there, which no uniform-grid scheme resolves in the
# first few cells.
SETTLE_FRACTION = 0.1


@dataclass(frozen=True)
class OscillatorConfig:
    m: float = 1.0
    k: float = 1.0
    alpha: float = 0.75
    tau: float = 2.0
    x_a: float = 1.0
    interval: tuple[float, float] = (0.0, 5.0)
    n: int = 2000

    def __post_init__(self) -> None:
        if not self.m > 0 or not self.k > 0:
            raise ValueError("mass and stiffness must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in the open interval (0, 1), got {self.alpha}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        a, b = self.interval
        if not b > a:
            raise ValueError(f"interval must satisfy a < b, got {self.interval}")
        if self.n < 8:
            raise ValueError(f"n must be at least 8, got {self.n}")
        object.__setattr__(self, "interval", (float(a), float(b)))

    @property
    def omega(self) -> float:
        return math.sqrt(self.k / self.m)

    def lagrangian(self) -> NaturalLagrangian:
        k = self.k
        return NaturalLagrangian(self.m, lambda x: 0.5 * k * x * x, lambda x: k * x, self.interval)


def _coefficient(variant: str, omega: float, alpha: float, tau: float) -> float:
    if variant == "nondim":
        return (omega * tau) ** 2
    if variant == "homogeneous":
        return omega**2 * tau ** (2.0 * (1.0 - alpha))
    if variant == "inhomogeneous":
        return omega**2
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def ml_solution(
    variant: str,
    s: np.ndarray,
    *,
    omega: float,
    alpha: float,
    tau: float,
    x_a: float = 1.0,
    tol: float | None = None,
) -> np.ndarray:
    """``x_a * E_{2 alpha}(-c s^{2 alpha})`` at elapsed times (or ``u``-offsets) ``s``.

    Unlike :class:`OscillatorConfig` this accepts ``alpha = 1``, where the
    classical solution ``x_a cos(omega s)`` is recovered.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    c = _coefficient(variant, omega, alpha, tau)
    s = np.asarray(s, dtype=float)
    params = MLParams(2.0 * alpha, tol if tol is not None else default_tol())
    return x_a * mittag_leffler_array(params, -c * s ** (2.0 * alpha))


def closed_form(cfg: OscillatorConfig, variant: str) -> SampledTrajectory:
    """Sample a variant's closed form; ``nondim`` lives on ``(a/tau, b/tau)``."""
    a, b = cfg.interval
    h = (b - a) / cfg.n
    if variant == "nondim":
        a, h = a / cfg.tau, h / cfg.tau
    s = h * np.arange(cfg.n + 1)
    x = ml_solution(variant, s, omega=cfg.omega, alpha=cfg.alpha, tau=cfg.tau, x_a=cfg.x_a)
    return SampledTrajectory(a, h, x)


def argument_dimensions() -> dict[str, Dimension]:
    """Dimension of each variant's Mittag-Leffler argument, inferred symbolically."""
    doc = parse(
        "order a;\nconst omega: T^(-1);\nconst tau: T;\nconst s: T;\nvar x: L of u: 1;\neq: 0 = 0;\n"
    )
    exprs = {
        "nondim": "(omega*tau)^2*u^(2*a)",
        "homogeneous": "omega^2*tau^(2-2*a)*s^(2*a)",
        "inhomogeneous": "omega^2*s^(2*a)",
    }
    return {k: infer_dimension(parse_expr(e, doc.env), doc.env) for k, e in exprs.items()}


def settled_max(r: SampledTrajectory, fraction: float = SETTLE_FRACTION) -> float:
    """Max ``|r|`` over ``t >= t0 + fraction * span``, last node excluded."""
    t = r.t
    mask = t >= r.t0 + fraction * (r.t_end - r.t0)
    mask[-1] = False
    return float(np.max(np.abs(r.values[mask])))


@dataclass
class ScenarioReport:
    config: OscillatorConfig
    closed_forms: dict[str, SampledTrajectory]
    abm: SampledTrajectory
    abm_max_error: float
    residual: SampledTrajectory
    residual_max: float
    dimensionalization_gap: float
    verdicts: dict[str, HomogeneityVerdict]
    argument_dimensions: dict[str, Dimension]
    files: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["interval"] = list(self.config.interval)
        cfg["omega"] = self.config.omega
        return {
            "config": cfg,
            "abm_max_error": self.abm_max_error,
            "residual_max": self.residual_max,
            "residual_window_start": self.residual.t0
            + SETTLE_FRACTION * (self.residual.t_end - self.residual.t0),
            "dimensionalization_gap": self.dimensionalization_gap,
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "argument_dimensions": {k: str(d) for k, d in self.argument_dimensions.items()},
            "argument_dimensionless": {k: d.is_dimensionless for k, d in self.argument_dimensions.items()},
            "files": list(self.files),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _fmt_param(v: float) -> str:
    return "%g" % v


def csv_name(variant: str, alpha: float, tau: float) -> str:
    return f"osc_{variant}_a{_fmt_param(alpha)}_tau{_fmt_param(tau)}.csv"


def run_scenario(cfg: OscillatorConfig, out_dir: str | Path | None = None) -> ScenarioReport:
    """Closed forms, an ABM cross-check, the fractional residual of ``x_h``,
    the dimensionalization identity and the homogeneity verdicts.

    With ``out_dir`` set, CSVs and ``report.json`` are written there.
    """
    forms = {v: closed_form(cfg, v) for v in VARIANTS}
    xh = forms["homogeneous"]

    c = _coefficient("homogeneous", cfg.omega, cfg.alpha, cfg.tau)
    mu = 2.0 * cfg.alpha
    problem = FdeProblem(
        mu, lambda t, x: -c * x, cfg.x_a, 0.0 if mu > 1.0 else None, cfg.interval, cfg.n
    )
    abm = solve_abm(problem)
    abm_err = float(np.max(np.abs(abm.values - xh.values)))

    spec = EmbeddingSpec(Method.HOMOGENEOUS, cfg.alpha, cfg.tau)
    residual = el_residual_fractional(cfg.lagrangian(), spec, xh, v0=0.0 if mu > 1.0 else None)

    # x_d(t) = x_n(t/tau): the nondim grid is the t grid divided by tau
    gap = float(np.max(np.abs(forms["nondim"].values - xh.values)))

    verdicts = {v: check_homogeneity(load(f"oscillator_{v}")) for v in VARIANTS}
    report = ScenarioReport(
        cfg, forms, abm, abm_err, residual, settled_max(residual), gap, verdicts, argument_dimensions()
    )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        named = dict(forms, abm=abm)
        for variant, traj in named.items():
            path = out / csv_name(variant, cfg.alpha, cfg.tau)
            write_csv(traj, path)
            report.files.append(str(path))
        path = out / csv_name("residual", cfg.alpha, cfg.tau)
        write_csv(residual, path, column="r")
        report.files.append(str(path))
        (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    return report


@dataclass
class FreeFallResult:
    verdict: HomogeneityVerdict
    rewritten: EquationDoc | None
    rewritten_verdict: HomogeneityVerdict | None
    g_value: float
    alpha: float
    #: numerical value of g^alpha R^(1-alpha) for the supplied g
    constant_value: float | None = None


EARTH_RADIUS = 6.371e6


def free_fall_scenario(
    g_value: float = 9.81,
    alpha: float = 0.5,
    radius: float = EARTH_RADIUS,
    doc: EquationDoc | None = None,
) -> FreeFallResult:
    """Naive fractional free fall, then the rewrite through ``g = G M / R^2``.

    ``doc`` replaces the naive equation; when it is already homogeneous for
    every order no rewrite is attempted.
    """
    verdict = check_homogeneity(doc if doc is not None else load("free_fall_naive"))
    if verdict.kind is VerdictKind.HOMOGENEOUS_FOR_ALL_ORDERS:
        return FreeFallResult(verdict, None, None, g_value, alpha)
    rewritten = load("free_fall_decomposed")
    value = g_value**alpha * radius ** (1.0 - alpha)
    return FreeFallResult(verdict, rewritten, check_homogeneity(rewritten), g_value, alpha, value)

