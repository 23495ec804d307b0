"""Reference equation sources for the homogeneity checker.

Each entry is DSL text; :func:`load` parses one by key. ``a`` and ``b`` are
fractional order symbols, ``t`` is time and ``y`` a spatial coordinate.
"""

from __future__ import annotations

from fracdyn.eqdsl import EquationDoc, parse

__all__ = ["SOURCES", "load"]

_OSC_HEADER = "order a;\nconst lambda: T^(-1);\nconst omega: T^(-1);\nvar x: L of t: T;\n"
_DIFF_HEADER = "order a;\nconst D: L^2*T^(-1);\nvar u: 1 of y: L, t: T;\n"
_FALL_HEADER = "order a;\nconst g: L*T^(-2);\nvar x: L of t: T;\n"

SOURCES: dict[str, str] = {
    # damped oscillator, classical and naive fractional rewrite
    "damped_oscillator": _OSC_HEADER + "eq: D(2,t)x + lambda*D(1,t)x + omega^2*x = 0;\n",
    "damped_oscillator_naive": _OSC_HEADER + "eq: FD(2*a,t)x + lambda*FD(a,t)x + omega^2*x = 0;\n",
    "damped_oscillator_powers": _OSC_HEADER + "eq: FD(2*a,t)x + lambda^(a)*FD(a,t)x + omega^(2*a)*x = 0;\n",
    # two more homogeneous variants of the same classical equation
    "damped_oscillator_variant_lambda": _OSC_HEADER
    + "eq: FD(2*a,t)x + lambda^(a)*FD(a,t)x + omega^2*lambda^(2*a-2)*x = 0;\n",
    "damped_oscillator_variant_two_orders": "order a;\norder b;\n"
    + _OSC_HEADER.removeprefix("order a;\n")
    + "eq: FD(2*a,t)x + lambda^(2*a-b)*FD(b,t)x + omega^(2*a)*x = 0;\n",
    # diffusion
    "diffusion": _DIFF_HEADER + "eq: D(1,t)u - D*D(2,y)u = 0;\n",
    "diffusion_naive": _DIFF_HEADER + "eq: FD(a,t)u - D*D(2,y)u = 0;\n",
    "diffusion_naive_power": _DIFF_HEADER + "eq: FD(a,t)u - D^(a)*D(2,y)u = 0;\n",
    "diffusion_fractional_space": _DIFF_HEADER + "eq: FD(a,t)u - D^(a)*FD(2*a,y)u = 0;\n",
    # free fall
    "free_fall": _FALL_HEADER + "eq: D(2,t)x + g = 0;\n",
    "free_fall_naive": _FALL_HEADER + "eq: FD(2*a,t)x + g = 0;\n",
    "free_fall_decomposed": _FALL_HEADER + "const R: L;\neq: FD(2*a,t)x + g^(a)*R^(1-a) = 0;\n",
    # harmonic oscillator, the three embedded equations
    "oscillator_homogeneous": "order a;\nconst m: M;\nconst k: M*T^(-2);\nconst tau: T;\nvar x: L of t: T;\n"
    + "eq: m*tau^(2*a-2)*FD(2*a,t)x + k*x = 0;\n",
    "oscillator_nondim": "order a;\nconst m: M;\nconst k: M*T^(-2);\nconst tau: T;\nvar x: L of u: 1;\n"
    + "eq: m*tau^(-2)*FD(2*a,u)x + k*x = 0;\n",
    "oscillator_inhomogeneous": "order a;\nconst m: M;\nconst k: M*T^(-2);\nvar x: L of t: T;\n"
    + "eq: m*FD(2*a,t)x + k*x = 0;\n",
}


def load(key: str) -> EquationDoc:
    try:
        return parse(SOURCES[key])
    except KeyError:
        raise KeyError(f"unknown equation {key!r}; known: {', '.join(sorted(SOURCES))}") from None
