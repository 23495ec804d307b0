"""``fracdyn`` command line.

Exit codes for ``check``: 0 homogeneous for every order, 2 homogeneous only
at particular orders, 3 inhomogeneous, 1 on any input or evaluation error.
``verify`` exits 0 when the check meets its tolerance and 3 otherwise.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

import numpy as np

from fracdyn.convergence import observed_orders
from fracdyn.dimension import ExponentExpr, VerdictKind
from fracdyn.eqdsl import (
    HomogeneousReplace,
    ReplaceDer,
    check_homogeneity,
    format_doc,
    parse,
    substitute_operator,
)
from fracdyn.errors import FracdynError
from fracdyn.fractops import CaputoSpec, caputo, power_rule
from fracdyn.lagrangian import (
    EmbeddingSpec,
    Method,
    check_coherence,
    check_fracconst_equivalence,
    check_method_equivalence,
)
from fracdyn.oscillator import OscillatorConfig, closed_form, run_scenario
from fracdyn.specialfn import MLParams, default_tol, mittag_leffler
from fracdyn.trajectory import SampledTrajectory, read_csv, write_csv

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_ERROR", "EXIT_CONDITIONAL", "EXIT_INHOMOGENEOUS"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONDITIONAL = 2
EXIT_INHOMOGENEOUS = 3

_VERDICT_EXIT = {
    VerdictKind.HOMOGENEOUS_FOR_ALL_ORDERS: EXIT_OK,
    VerdictKind.HOMOGENEOUS_ONLY_AT: EXIT_CONDITIONAL,
    VerdictKind.INHOMOGENEOUS: EXIT_INHOMOGENEOUS,
}


class UsageError(Exception):
    """Invalid command-line parameters."""


def _g(v: float) -> str:
    return "%.17g" % v


def _dump(obj, indent: str = "") -> str:
    """JSON text with every float printed as ``%.17g``."""
    inner = indent + "  "
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _g(obj) if math.isfinite(obj) else json.dumps(str(obj))
    if isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_dump(v, inner)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + _dump(v, inner) for v in obj) + "\n" + indent + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _verdict_lines(verdict) -> list[str]:
    lines = [f"  {term}: {dim}" for term, dim in verdict.per_term]
    lines.append(f"verdict: {verdict}")
    return lines


# ---------------------------------------------------------------------------
# commands


def cmd_check(args: argparse.Namespace) -> int:
    doc = parse(Path(args.file).read_text(encoding="utf-8"))
    verdict = check_homogeneity(doc)
    if args.json:
        print(_dump(verdict.to_dict()))
    else:
        print("terms:")
        print("\n".join(_verdict_lines(verdict)))
    return _VERDICT_EXIT[verdict.kind]


def _alpha_expr(text: str) -> ExponentExpr:
    try:
        value = Fraction(text)
    except ValueError:
        expr = ExponentExpr.of(text)
        if expr.is_constant:
            value = expr.constant
        else:
            return expr
    if not 0 < value < 1:
        raise UsageError(f"--alpha must lie in (0, 1), got {text}")
    return ExponentExpr(value)


def cmd_embed(args: argparse.Namespace) -> int:
    doc = parse(Path(args.file).read_text(encoding="utf-8"))
    alpha = _alpha_expr(args.alpha)
    if args.method == "direct":
        rule = ReplaceDer(alpha, wrt=args.wrt)
    else:
        if args.tau is not None and not args.tau > 0:
            raise UsageError(f"--tau must be positive, got {args.tau}")
        rule = HomogeneousReplace(alpha, tau=args.tau_name, wrt=args.wrt)
    before = check_homogeneity(doc)
    out = substitute_operator(doc, rule)
    after = check_homogeneity(out)
    text = format_doc(out)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    report = {
        "method": args.method,
        "alpha": str(alpha),
        "tau": args.tau,
        "changed": out is not doc,
        "before": before.to_dict(),
        "after": after.to_dict(),
    }
    summary = _dump(report) if args.json else f"before: {before}\nafter: {after}"
    # without -o the rewritten document owns stdout
    print(summary, file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK


def cmd_oscillator(args: argparse.Namespace) -> int:
    cfg = OscillatorConfig(
        m=args.m, k=args.k, alpha=args.alpha, tau=args.tau, x_a=args.x_a, interval=(args.a, args.b), n=args.n
    )
    report = run_scenario(cfg, args.out)
    print(
        f"equivalence gap {_g(report.dimensionalization_gap)}; residual max {_g(report.residual_max)}; "
        f"abm max error {_g(report.abm_max_error)}; files in {args.out}"
    )
    return EXIT_OK


def _ladder(n: int, levels: int) -> list[int]:
    return [n * 2**i for i in range(levels)]


def _verify_scaling(args) -> dict:
    p, alpha, tau = args.power, args.alpha, args.tau
    levels = []
    for n in _ladder(args.n, args.levels):
        x = SampledTrajectory.sample(lambda t: t**p, 0.0, 1.0, n)
        lhs = caputo(alpha, x)
        scaled = tau**alpha * lhs.values
        rhs = caputo(alpha, x.rescaled(tau)).values
        exact = tau**alpha * power_rule(p, alpha, x.t)
        sl = slice(1, -1)
        mask = np.abs(scaled[sl]) > 1e-8
        gap = float(np.max(np.abs(scaled[sl] - rhs[sl])[mask] / np.abs(scaled[sl])[mask]))
        err = float(np.max(np.abs(rhs - exact)) / np.max(np.abs(exact)))
        levels.append({"n": n, "h": x.h, "gap": gap, "error": err})
    worst = max(lv["gap"] for lv in levels)
    return {"levels": levels, "passed": worst <= 5e-3, "order_of": "error"}


def _oscillator_trajectory(args, n: int) -> SampledTrajectory:
    cfg = OscillatorConfig(alpha=args.alpha, tau=args.tau, interval=(0.0, args.b), n=n)
    return closed_form(cfg, "homogeneous")


def _verify_pairs(args, check) -> dict:
    levels = []
    for n in _ladder(args.n, args.levels):
        x = _oscillator_trajectory(args, n)
        rep = check(x)
        levels.append({"n": n, "h": x.h, "gap": rep.max_residual_gap, "relative_gap": rep.relative_gap})
    return {"levels": levels, "order_of": "gap"}


def cmd_verify(args: argparse.Namespace) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError(f"--alpha must lie in (0, 1), got {args.alpha}")
    if not args.tau > 0:
        raise UsageError(f"--tau must be positive, got {args.tau}")
    if args.n < 8 or args.levels < 2:
        raise UsageError("--n must be at least 8 and --levels at least 2")
    osc = OscillatorConfig(alpha=args.alpha, tau=args.tau).lagrangian()
    if args.what == "scaling":
        result = _verify_scaling(args)
    elif args.what == "equivalence":
        result = _verify_pairs(args, lambda x: check_method_equivalence(osc, args.alpha, args.tau, x))
        result["passed"] = all(lv["relative_gap"] <= 1e-10 for lv in result["levels"])
        if args.tau == 1.0:
            result["passed"] = result["passed"] and all(lv["gap"] == 0.0 for lv in result["levels"])
    elif args.what == "coherence":
        spec = EmbeddingSpec(Method.HOMOGENEOUS, args.alpha, args.tau)
        result = _verify_pairs(args, lambda x: check_coherence(osc, spec, x))
        result["passed"] = all(lv["relative_gap"] <= 1e-12 for lv in result["levels"])
    else:
        result = _verify_pairs(args, lambda x: check_fracconst_equivalence(osc, args.alpha, args.tau, x))
        result["passed"] = all(lv["relative_gap"] <= 1e-12 for lv in result["levels"])
    key = result["order_of"]
    result["orders"] = observed_orders([lv[key] for lv in result["levels"]])
    result.update(what=args.what, alpha=args.alpha, tau=args.tau)
    if args.json:
        print(_dump(result))
    else:
        for lv in result["levels"]:
            print(" ".join(f"{k}={_g(v) if isinstance(v, float) else v}" for k, v in lv.items()))
        orders = ", ".join("exact" if o is None else _g(o) for o in result["orders"])
        print(f"observed order ({key}): {orders}")
        print(f"{args.what}: {'passed' if result['passed'] else 'FAILED'}")
    return EXIT_OK if result["passed"] else EXIT_INHOMOGENEOUS


def cmd_ml(args: argparse.Namespace) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    print(_g(mittag_leffler(MLParams(args.lam, tol, args.max_terms), args.z)))
    return EXIT_OK


def cmd_caputo(args: argparse.Namespace) -> int:
    x = read_csv(args.input)
    d = caputo(CaputoSpec(args.mu, args.tau, args.v0), x)
    text = write_csv(d, args.output, column="d")
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is taken by conditional verdicts
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fracdyn", description="Homogeneous fractional embeddings toolkit.")
    p.add_argument("--config", help="JSON file whose keys override the command's flags")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="dimension-check an equation file")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("embed", help="replace integer derivatives by fractional ones")
    e.add_argument("file")
    e.add_argument("--method", choices=("direct", "homogeneous"), required=True)
    e.add_argument("--alpha", required=True, help="order: a number in (0,1) or an order symbol")
    e.add_argument("--tau", type=float, help="value of the time constant (recorded in the report)")
    e.add_argument("--tau-name", default="tau")
    e.add_argument("--wrt", default="t")
    e.add_argument("-o", "--output")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_embed)

    o = sub.add_parser("oscillator", help="run the harmonic oscillator scenario")
    o.add_argument("--m", type=float, default=1.0)
    o.add_argument("--k", type=float, default=1.0)
    o.add_argument("--alpha", type=float, default=0.75)
    o.add_argument("--tau", type=float, default=2.0)
    o.add_argument("--x-a", dest="x_a", type=float, default=1.0)
    o.add_argument("--a", type=float, default=0.0)
    o.add_argument("--b", type=float, default=5.0)
    o.add_argument("--n", type=int, default=2000)
    o.add_argument("--out", default=".")
    o.set_defaults(func=cmd_oscillator)

    v = sub.add_parser("verify", help="run a check over a refinement ladder")
    v.add_argument("--what", choices=("scaling", "equivalence", "coherence", "fracconst"), required=True)
    v.add_argument("--alpha", type=float, default=0.5)
    v.add_argument("--tau", type=float, default=2.0)
    v.add_argument("--n", type=int, default=250, help="intervals on the coarsest grid")
    v.add_argument("--levels", type=int, default=3)
    v.add_argument("--power", type=float, default=2.0, help="scaling: test function t**power on [0, 1]")
    v.add_argument("--b", type=float, default=5.0, help="oscillator checks: end of the interval [0, b]")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("ml", help="evaluate the Mittag-Leffler function")
    m.add_argument("--lambda", dest="lam", type=float, required=True)
    m.add_argument("--z", type=float, required=True)
    m.add_argument("--tol", type=float)
    m.add_argument("--max-terms", type=int, default=500)
    m.set_defaults(func=cmd_ml)

    d = sub.add_parser("caputo", help="Caputo derivative of a sampled trajectory")
    d.add_argument("--mu", type=float, required=True)
    d.add_argument("--tau", type=float)
    d.add_argument("--v0", type=float, help="known initial slope (orders above 1)")
    d.add_argument("--input", required=True)
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_caputo)
    return p


def _apply_config(args: argparse.Namespace, path: str) -> None:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise UsageError("--config must hold a JSON object")
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest in ("func", "command", "config") or not hasattr(args, dest):
            raise UsageError(f"unknown config key {key!r} for command {args.command!r}")
        current = getattr(args, dest)
        if isinstance(current, bool) or current is None or isinstance(value, type(current)):
            setattr(args, dest, value)
        elif isinstance(current, float) and isinstance(value, int):
            setattr(args, dest, float(value))
        else:
            raise UsageError(f"config key {key!r} has the wrong type")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(args, args.config)
        return args.func(args)
    except (FracdynError, UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"fracdyn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
