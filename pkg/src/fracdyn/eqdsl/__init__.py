"""Equation language: AST, parser/printer, dimension inference and embedding."""

from fracdyn.eqdsl.analysis import (
    HomogeneousReplace,
    OperatorRule,
    ReplaceDer,
    check_homogeneity,
    infer_dimension,
    substitute_operator,
)
from fracdyn.eqdsl.ast import (
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
from fracdyn.eqdsl.syntax import format_doc, format_expr, parse, parse_expr

# public alias; ``format`` would shadow the builtin inside this package
format = format_doc  # noqa: A001

__all__ = [
    "Add", "Apply", "Const", "DeclKind", "Declaration", "Der", "Environment",
    "EquationDoc", "Expr", "FracDer", "HomogeneousReplace", "Mul", "NumLit",
    "OperatorRule", "Pow", "ReplaceDer", "Var", "add", "check_homogeneity",
    "format", "format_doc", "format_expr", "infer_dimension", "mul", "parse",
    "parse_expr", "substitute_operator",
]
