"""Parser and canonical printer for the equation language.

Grammar::

    doc    := { decl } "eq:" expr "=" expr ";"
    decl   := "order" IDENT ";" | "const" IDENT ":" dim ";"
            | "var" IDENT ":" dim "of" IDENT ":" dim { "," IDENT ":" dim } ";"
            | "fn" IDENT ":" dim "->" dim ";"
    expr   := ["-"] term { ("+"|"-") term }
    term   := pow { "*" pow }
    pow    := atom [ "^" "(" affine ")" | "^" ["-"] INT ]
    atom   := NUM | IDENT | IDENT "(" expr ")" | "(" expr ")"
            | "D" "(" INT "," IDENT ")" atom | "FD" "(" affine "," IDENT ")" atom

A leading minus folds into the term's first literal (``-3*x`` is the product
``(-3)*x``). The right-hand side is moved left at parse time so every parsed
document reads ``lhs = 0``.
"""

from __future__ import annotations

from fracdyn._lexer import TokenStream, tokenize
from fracdyn.dimension import ExponentExpr, parse_affine_tokens, parse_dimension_tokens, parse_power_suffix
from fracdyn.eqdsl.ast import (
    RESERVED,
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
    is_negative_led,
    mul,
    negate,
)
from fracdyn.errors import UndeclaredName

__all__ = ["parse", "parse_expr", "format_doc", "format_expr"]


class _Parser:
    def __init__(self, ts: TokenStream, env: Environment) -> None:
        self.ts = ts
        self.env = env

    def is_order(self, name: str) -> bool:
        return name in self.env.orders

    # declarations

    def declaration(self) -> Declaration:
        ts = self.ts
        kw = ts.next().text
        name_tok = ts.expect_kind("ident", "a name")
        name = name_tok.text
        if name in RESERVED - {"D"}:
            ts.error(f"{name!r} is a reserved word", name_tok)
        if kw == "order":
            ts.expect(";")
            return Declaration(DeclKind.ORDER, name)
        ts.expect(":")
        dim = parse_dimension_tokens(ts, self.is_order)
        if kw == "const":
            ts.expect(";")
            return Declaration(DeclKind.CONSTANT, name, dim)
        if kw == "fn":
            ts.expect("->")
            result = parse_dimension_tokens(ts, self.is_order)
            ts.expect(";")
            return Declaration(DeclKind.FUNCTION, name, result, domain=dim)
        ts.expect("of")
        of = []
        while True:
            ind = ts.expect_kind("ident", "independent variable").text
            ts.expect(":")
            of.append((ind, parse_dimension_tokens(ts, self.is_order)))
            if not ts.accept(","):
                break
        ts.expect(";")
        return Declaration(DeclKind.VARIABLE, name, dim, of=tuple(of))

    # expressions

    def expr(self) -> Expr:
        ts = self.ts
        neg = ts.accept("-")
        first = self.term()
        terms = [negate(first) if neg else first]
        while ts.at("+") or ts.at("-"):
            op = ts.next().text
            t = self.term()
            terms.append(negate(t) if op == "-" else t)
        return add(*terms)

    def term(self) -> Expr:
        factors = [self.pow()]
        while self.ts.accept("*"):
            factors.append(self.pow())
        return mul(*factors)

    def pow(self) -> Expr:
        base = self.atom()
        e = parse_power_suffix(self.ts, self.is_order)
        return base if e is None else Pow(base, e)

    def atom(self) -> Expr:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "num":
            ts.next()
            return NumLit(tok.value)
        if ts.accept("("):
            inner = self.expr()
            ts.expect(")")
            return inner
        if tok.kind != "ident":
            ts.error(f"expected an expression, found {tok.text or 'end of input'!r}", tok)
        if tok.text == "D" and ts.at("(", 1):
            ts.next()
            ts.next()
            k_tok = ts.expect_kind("num", "derivative order")
            if k_tok.value.denominator != 1 or k_tok.value < 1 or "." in k_tok.text:
                ts.error("integer derivative order must be a positive integer", k_tok)
            wrt = self.wrt()
            return Der(int(k_tok.value), wrt, self.atom())
        if tok.text == "FD" and ts.at("(", 1):
            ts.next()
            ts.next()
            order = parse_affine_tokens(ts, self.is_order)
            wrt = self.wrt()
            return FracDer(order, wrt, self.atom())
        ts.next()
        name = tok.text
        if ts.at("("):
            if name not in self.env.functions and name not in TRANSCENDENTAL:
                raise UndeclaredName(f"undeclared function {name!r} (line {tok.line}, column {tok.column})")
            ts.next()
            arg = self.expr()
            ts.expect(")")
            return Apply(name, arg)
        if name in self.env.constants:
            return Const(name)
        if name in self.env.variables or name in self.env.independents:
            return Var(name)
        raise UndeclaredName(f"undeclared name {name!r} (line {tok.line}, column {tok.column})")

    def wrt(self) -> str:
        ts = self.ts
        ts.expect(",")
        tok = ts.expect_kind("ident", "independent variable")
        if tok.text not in self.env.independents:
            raise UndeclaredName(
                f"{tok.text!r} is not a declared independent variable (line {tok.line}, column {tok.column})"
            )
        ts.expect(")")
        return tok.text


def _prescan_orders(tokens) -> set[str]:
    out = set()
    for i in range(len(tokens) - 2):
        if tokens[i].kind == "ident" and tokens[i].text == "order" and tokens[i + 1].kind == "ident":
            out.add(tokens[i + 1].text)
    return out


def parse(text: str) -> EquationDoc:
    """Parse a document; raises DSLSyntaxError, UndeclaredName or DuplicateDeclaration."""
    tokens = tokenize(text)
    ts = TokenStream(tokens)
    parser = _Parser(ts, Environment(orders=_prescan_orders(tokens)))
    decls: list[Declaration] = []
    while not ts.at("eq"):
        tok = ts.peek()
        if tok.kind == "ident" and tok.text in ("order", "const", "var", "fn"):
            decls.append(parser.declaration())
        else:
            ts.error(f"expected a declaration or 'eq:', found {tok.text or 'end of input'!r}", tok)
    parser.env = Environment.from_declarations(decls)
    ts.expect("eq")
    ts.expect(":")
    lhs = parser.expr()
    ts.expect("=")
    rhs = parser.expr()
    ts.expect(";")
    ts.expect_eof()
    if not (isinstance(rhs, NumLit) and rhs.value == 0):
        moved = [negate(t) for t in (rhs.terms if isinstance(rhs, Add) else (rhs,))]
        lhs = add(lhs, *moved)
        rhs = NumLit(0)
    return EquationDoc(tuple(decls), lhs, rhs)


def parse_expr(text: str, declarations) -> Expr:
    """Parse a bare expression against an existing declaration list."""
    env = declarations if isinstance(declarations, Environment) else Environment.from_declarations(declarations)
    ts = TokenStream(text)
    e = _Parser(ts, env).expr()
    ts.expect_eof()
    return e


# ---------------------------------------------------------------------------
# printing


def _num(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _exponent(e: ExponentExpr) -> str:
    if e.is_constant and e.constant.denominator == 1 and e.constant >= 0:
        return f"^{e.constant.numerator}"
    return f"^({e})"


def _atom(e: Expr) -> str:
    if isinstance(e, NumLit):
        return _num(e.value) if e.value >= 0 else f"({_num(e.value)})"
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Apply):
        return f"{e.fn}({format_expr(e.arg)})"
    if isinstance(e, Der):
        return f"D({e.order},{e.wrt}){_atom(e.operand)}"
    if isinstance(e, FracDer):
        return f"FD({e.order},{e.wrt}){_atom(e.operand)}"
    return f"({format_expr(e)})"


def _pow(e: Expr) -> str:
    if isinstance(e, Pow):
        return _atom(e.base) + _exponent(e.exponent)
    return _atom(e)


def _term(e: Expr) -> str:
    if isinstance(e, Mul):
        return "*".join(_pow(f) for f in e.factors)
    return _pow(e)


def _signed(e: Expr) -> tuple[str, str]:
    if is_negative_led(e):
        return "-", _term(negate(e))
    return "+", _term(e)


def format_expr(e: Expr) -> str:
    terms = e.terms if isinstance(e, Add) else (e,)
    out = []
    for i, t in enumerate(terms):
        sign, body = _signed(t)
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def _format_decl(d: Declaration) -> str:
    if d.kind is DeclKind.ORDER:
        return f"order {d.name};"
    if d.kind is DeclKind.CONSTANT:
        return f"const {d.name}: {d.dimension};"
    if d.kind is DeclKind.FUNCTION:
        return f"fn {d.name}: {d.domain} -> {d.dimension};"
    of = ", ".join(f"{n}: {dim}" for n, dim in d.of)
    return f"var {d.name}: {d.dimension} of {of};"


def format_doc(doc: EquationDoc) -> str:
    lines = [_format_decl(d) for d in doc.declarations]
    lines.append(f"eq: {format_expr(doc.lhs)} = {format_expr(doc.rhs)};")
    return "\n".join(lines) + "\n"
