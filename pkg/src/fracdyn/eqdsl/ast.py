"""Immutable expression trees and equation documents.

Nodes are frozen dataclasses, so structural equality is ``==``. Build sums and
products through :func:`add` and :func:`mul`; they flatten nested nodes and
collapse singletons, which is the canonical form the parser produces.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from fracdyn.dimension import Dimension, ExponentExpr
from fracdyn.errors import DuplicateDeclaration, UndeclaredName

#: Functions usable without declaration; they demand a dimensionless argument.
TRANSCENDENTAL = frozenset({"sin", "cos", "tan", "exp", "log", "sinh", "cosh", "tanh"})

#: Operator keywords that cannot be used as function names.
RESERVED = frozenset({"D", "FD", "order", "const", "var", "fn", "eq", "of"})


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class NumLit:
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: ExponentExpr


@dataclass(frozen=True)
class Mul:
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Add:
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Der:
    order: int
    wrt: str
    operand: Expr


@dataclass(frozen=True)
class FracDer:
    order: ExponentExpr
    wrt: str
    operand: Expr


@dataclass(frozen=True)
class Apply:
    fn: str
    arg: Expr


Expr = Union[Const, NumLit, Var, Pow, Mul, Add, Der, FracDer, Apply]


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, Mul) else (f,))
    if not flat:
        return NumLit(1)
    return flat[0] if len(flat) == 1 else Mul(tuple(flat))


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        flat.extend(t.terms if isinstance(t, Add) else (t,))
    if not flat:
        return NumLit(0)
    return flat[0] if len(flat) == 1 else Add(tuple(flat))


def is_negative_led(e: Expr) -> bool:
    """True for a negative literal or a product that starts with one."""
    if isinstance(e, NumLit):
        return e.value < 0
    return isinstance(e, Mul) and isinstance(e.factors[0], NumLit) and e.factors[0].value < 0


def negate(e: Expr) -> Expr:
    """Fold a sign change into the leading literal, or prepend ``-1``."""
    if isinstance(e, NumLit):
        return NumLit(-e.value)
    if isinstance(e, Mul) and isinstance(e.factors[0], NumLit):
        rest = e.factors[1:]
        if e.factors[0].value == -1 and not isinstance(rest[0], NumLit):
            # -1*g negates to g, not 1*g; a following literal would merge on reparse
            return mul(*rest)
        return Mul((NumLit(-e.factors[0].value),) + rest)
    return mul(NumLit(-1), e)


def terms_of(e: Expr) -> tuple[Expr, ...]:
    return e.terms if isinstance(e, Add) else (e,)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, (Der, FracDer)):
        return (e.operand,)
    if isinstance(e, Apply):
        return (e.arg,)
    return ()


def walk(e: Expr) -> Iterable[Expr]:
    yield e
    for c in children(e):
        yield from walk(c)


# ---------------------------------------------------------------------------
# declarations


class DeclKind(enum.Enum):
    ORDER = "order"
    CONSTANT = "const"
    VARIABLE = "var"
    FUNCTION = "fn"


@dataclass(frozen=True)
class Declaration:
    kind: DeclKind
    name: str
    #: constant/variable dimension, or a function's result dimension
    dimension: Dimension | None = None
    #: independent variables a variable depends on, with their dimensions
    of: tuple[tuple[str, Dimension], ...] = ()
    #: function argument dimension
    domain: Dimension | None = None


@dataclass
class Environment:
    """Name tables derived from a declaration list."""

    orders: set[str] = field(default_factory=set)
    constants: dict[str, Dimension] = field(default_factory=dict)
    variables: dict[str, Dimension] = field(default_factory=dict)
    independents: dict[str, Dimension] = field(default_factory=dict)
    functions: dict[str, tuple[Dimension, Dimension]] = field(default_factory=dict)

    @classmethod
    def from_declarations(cls, decls: Iterable[Declaration]) -> Environment:
        env = cls()
        seen: set[str] = set()
        for d in decls:
            if d.name in seen or d.name in env.independents:
                raise DuplicateDeclaration(f"{d.name!r} declared twice")
            seen.add(d.name)
            if d.kind is DeclKind.ORDER:
                env.orders.add(d.name)
            elif d.kind is DeclKind.CONSTANT:
                env.constants[d.name] = d.dimension
            elif d.kind is DeclKind.FUNCTION:
                if d.name in RESERVED or d.name in TRANSCENDENTAL:
                    raise DuplicateDeclaration(f"function name {d.name!r} is reserved")
                env.functions[d.name] = (d.domain, d.dimension)
            else:
                env.variables[d.name] = d.dimension
                for ind, dim in d.of:
                    if ind in seen:
                        raise DuplicateDeclaration(f"independent variable {ind!r} clashes with a declaration")
                    prev = env.independents.get(ind)
                    if prev is not None and prev != dim:
                        raise DuplicateDeclaration(
                            f"independent variable {ind!r} declared with dimensions {prev} and {dim}"
                        )
                    env.independents[ind] = dim
        return env

    def value_dimension(self, name: str) -> Dimension:
        for table in (self.constants, self.variables, self.independents):
            if name in table:
                return table[name]
        raise UndeclaredName(f"undeclared name {name!r}")

    def is_value(self, name: str) -> bool:
        return name in self.constants or name in self.variables or name in self.independents


@dataclass(frozen=True)
class EquationDoc:
    declarations: tuple[Declaration, ...]
    lhs: Expr
    rhs: Expr = NumLit(0)

    @property
    def env(self) -> Environment:
        return Environment.from_declarations(self.declarations)

    def declaration(self, name: str) -> Declaration | None:
        return next((d for d in self.declarations if d.name == name), None)

    def terms(self) -> tuple[Expr, ...]:
        """Top-level additive terms of ``lhs - rhs``, zero literals dropped."""
        out = list(terms_of(self.lhs))
        if not (isinstance(self.rhs, NumLit) and self.rhs.value == 0):
            out.extend(negate(t) for t in terms_of(self.rhs))
        return tuple(t for t in out if not (isinstance(t, NumLit) and t.value == 0))
