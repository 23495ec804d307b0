"""Dimension inference, homogeneity checking and operator substitution."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from fracdyn.dimension import (
    DIMENSIONLESS,
    Dimension,
    ExponentExpr,
    ExponentLike,
    HomogeneityVerdict,
    VerdictKind,
    dim_mul,
    dim_pow,
    solve_equal,
)
from fracdyn.eqdsl.ast import (
    TRANSCENDENTAL,
    Add,
    Apply,
    Const,
    DeclKind,
    Declaration,
    Der,
    Environment,
    EquationDoc,
    Expr,
    FracDer,
    Mul,
    NumLit,
    Pow,
    Var,
    add,
    mul,
)
from fracdyn.eqdsl.syntax import format_expr
from fracdyn.errors import (
    DimensionedTranscendentalArg,
    DimensionError,
    DuplicateDeclaration,
    InhomogeneousSum,
    NonAffineExponent,
    SignatureMismatch,
    UndeclaredName,
)

__all__ = [
    "infer_dimension",
    "check_homogeneity",
    "ReplaceDer",
    "HomogeneousReplace",
    "OperatorRule",
    "substitute_operator",
]

TIME = Dimension.of(T=1)


def _env(env: Environment | EquationDoc | list[Declaration]) -> Environment:
    if isinstance(env, Environment):
        return env
    if isinstance(env, EquationDoc):
        return env.env
    return Environment.from_declarations(env)


def infer_dimension(e: Expr, env: Environment | EquationDoc | list[Declaration]) -> Dimension:
    env = _env(env)

    def go(e: Expr) -> Dimension:
        if isinstance(e, NumLit):
            return DIMENSIONLESS
        if isinstance(e, (Const, Var)):
            return env.value_dimension(e.name)
        if isinstance(e, Mul):
            out = DIMENSIONLESS
            for f in e.factors:
                out = dim_mul(out, go(f))
            return out
        if isinstance(e, Pow):
            return dim_pow(go(e.base), e.exponent)
        if isinstance(e, Add):
            dims = [go(t) for t in e.terms]
            for t, d in zip(e.terms[1:], dims[1:]):
                if d != dims[0]:
                    raise InhomogeneousSum(
                        f"sum mixes {dims[0]} ({format_expr(e.terms[0])}) with {d} ({format_expr(t)})"
                    )
            return dims[0]
        if isinstance(e, (Der, FracDer)):
            if e.wrt not in env.independents:
                raise UndeclaredName(f"{e.wrt!r} is not a declared independent variable")
            return dim_mul(go(e.operand), dim_pow(env.independents[e.wrt], -ExponentExpr.of(e.order)))
        if isinstance(e, Apply):
            arg = go(e.arg)
            if e.fn in env.functions:
                domain, result = env.functions[e.fn]
                if arg != domain:
                    raise SignatureMismatch(f"{e.fn} expects {domain}, got {arg}")
                return result
            if e.fn in TRANSCENDENTAL:
                if not arg.is_dimensionless:
                    raise DimensionedTranscendentalArg(f"{e.fn}() applied to an argument of dimension {arg}")
                return DIMENSIONLESS
            raise UndeclaredName(f"undeclared function {e.fn!r}")
        raise TypeError(f"not an expression node: {e!r}")

    return go(e)


def check_homogeneity(doc: EquationDoc) -> HomogeneityVerdict:
    """Infer each top-level term's dimension and decide when they agree."""
    env = doc.env
    terms = doc.terms()
    if not terms:
        return HomogeneityVerdict(VerdictKind.HOMOGENEOUS_FOR_ALL_ORDERS)
    labels = [format_expr(t) for t in terms]
    dims = []
    for t, label in zip(terms, labels):
        try:
            dims.append(infer_dimension(t, env))
        except (DimensionError, NonAffineExponent) as exc:
            exc.term = label
            exc.args = (f"in term {label!r}: {exc}",)
            raise
    return solve_equal(dims, labels)


# ---------------------------------------------------------------------------
# operator substitution


@dataclass(frozen=True)
class ReplaceDer:
    """``D(k, wrt) -> FD(k*alpha, wrt)``."""

    alpha: ExponentExpr
    wrt: str = "t"

    def __init__(self, alpha: ExponentLike, wrt: str = "t") -> None:
        object.__setattr__(self, "alpha", ExponentExpr.of(alpha))
        object.__setattr__(self, "wrt", wrt)


@dataclass(frozen=True)
class HomogeneousReplace:
    """``D(k, wrt) -> tau^(k*(alpha-1)) * FD(k*alpha, wrt)``."""

    alpha: ExponentExpr
    tau: str = "tau"
    wrt: str = "t"

    def __init__(self, alpha: ExponentLike, tau: str = "tau", wrt: str = "t") -> None:
        object.__setattr__(self, "alpha", ExponentExpr.of(alpha))
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "wrt", wrt)


OperatorRule = Union[ReplaceDer, HomogeneousReplace]


def _rewrite(e: Expr, rule: OperatorRule) -> tuple[Expr, bool]:
    if isinstance(e, Der):
        inner, hit = _rewrite(e.operand, rule)
        if e.wrt != rule.wrt:
            return replace(e, operand=inner), hit
        frac = FracDer(rule.alpha.scale(e.order), e.wrt, inner)
        if isinstance(rule, HomogeneousReplace):
            scale = (rule.alpha - 1).scale(e.order)
            if not scale.is_zero:
                return mul(Pow(Const(rule.tau), scale), frac), True
        return frac, True
    if isinstance(e, FracDer):
        inner, hit = _rewrite(e.operand, rule)
        return replace(e, operand=inner), hit
    if isinstance(e, Pow):
        inner, hit = _rewrite(e.base, rule)
        return Pow(inner, e.exponent), hit
    if isinstance(e, Apply):
        inner, hit = _rewrite(e.arg, rule)
        return Apply(e.fn, inner), hit
    if isinstance(e, Mul):
        parts = [_rewrite(f, rule) for f in e.factors]
        return mul(*(p for p, _ in parts)), any(h for _, h in parts)
    if isinstance(e, Add):
        parts = [_rewrite(t, rule) for t in e.terms]
        return add(*(p for p, _ in parts)), any(h for _, h in parts)
    return e, False


def _ensure(decls: list[Declaration], new: Declaration) -> None:
    old = next((d for d in decls if d.name == new.name), None)
    if old is None:
        decls.append(new)
    elif old.kind is not new.kind or old.dimension != new.dimension:
        raise DuplicateDeclaration(f"{new.name!r} already declared incompatibly")


def substitute_operator(doc: EquationDoc, rule: OperatorRule) -> EquationDoc:
    """Replace integer derivatives w.r.t. ``rule.wrt`` by fractional ones."""
    lhs, hit_l = _rewrite(doc.lhs, rule)
    rhs, hit_r = _rewrite(doc.rhs, rule)
    if not (hit_l or hit_r):
        return doc
    decls = list(doc.declarations)
    n_orders = sum(d.kind is DeclKind.ORDER for d in decls)
    for sym in sorted(rule.alpha.symbols):
        if doc.declaration(sym) is None:
            # order declarations lead the document
            decls.insert(n_orders, Declaration(DeclKind.ORDER, sym))
            n_orders += 1
    if isinstance(rule, HomogeneousReplace):
        _ensure(decls, Declaration(DeclKind.CONSTANT, rule.tau, TIME))
    return EquationDoc(tuple(decls), lhs, rhs)
