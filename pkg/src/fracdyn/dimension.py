"""Physical dimensions whose exponents are affine in symbolic fractional orders.

A :class:`Dimension` maps each base unit (``L``, ``M``, ``T``) to an
:class:`ExponentExpr`, an exact rational affine form such as ``-1-a`` or
``2*a-2``. Products of two order-dependent exponents are rejected, which keeps
every homogeneity question a linear system over the rationals that
:func:`solve_equal` decides exactly.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from fracdyn._lexer import TokenStream
from fracdyn.errors import NonAffineExponent, UndeclaredName

__all__ = [
    "BASE_UNITS",
    "ExponentExpr",
    "Dimension",
    "DIMENSIONLESS",
    "VerdictKind",
    "HomogeneityVerdict",
    "dim_mul",
    "dim_pow",
    "solve_equal",
    "parse_affine",
    "parse_dimension",
]

#: Base units in canonical print order. Add an entry here to extend the system.
BASE_UNITS: tuple[str, ...] = ("L", "M", "T")

Rational = Union[int, Fraction]
ExponentLike = Union["ExponentExpr", int, Fraction, str]


def _frac(q: Rational) -> Fraction:
    if isinstance(q, bool) or not isinstance(q, (int, Fraction)):
        raise TypeError(f"exact rational expected, got {type(q).__name__}")
    return Fraction(q)


@dataclass(frozen=True)
class ExponentExpr:
    """``constant + sum(coeff * symbol)`` with rational coefficients.

    Zero coefficients are never stored, so dataclass equality is equality of
    canonical forms.
    """

    constant: Fraction = Fraction(0)
    coeffs: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "constant", _frac(self.constant))
        merged: dict[str, Fraction] = {}
        for name, c in self.coeffs:
            merged[name] = merged.get(name, Fraction(0)) + _frac(c)
        canon = tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        object.__setattr__(self, "coeffs", canon)

    # construction

    @classmethod
    def symbol(cls, name: str, coeff: Rational = 1) -> ExponentExpr:
        return cls(Fraction(0), ((name, _frac(coeff)),))

    @classmethod
    def of(cls, value: ExponentLike) -> ExponentExpr:
        if isinstance(value, ExponentExpr):
            return value
        if isinstance(value, str):
            return parse_affine(value)
        return cls(_frac(value))

    # queries

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    @property
    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.coeffs)

    def coeff(self, name: str) -> Fraction:
        return dict(self.coeffs).get(name, Fraction(0))

    # arithmetic

    def __add__(self, other: ExponentLike) -> ExponentExpr:
        other = ExponentExpr.of(other)
        return ExponentExpr(self.constant + other.constant, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> ExponentExpr:
        return ExponentExpr(-self.constant, tuple((k, -v) for k, v in self.coeffs))

    def __sub__(self, other: ExponentLike) -> ExponentExpr:
        return self + (-ExponentExpr.of(other))

    def __rsub__(self, other: ExponentLike) -> ExponentExpr:
        return ExponentExpr.of(other) - self

    def scale(self, q: Rational) -> ExponentExpr:
        q = _frac(q)
        return ExponentExpr(self.constant * q, tuple((k, v * q) for k, v in self.coeffs))

    def __mul__(self, other: ExponentLike) -> ExponentExpr:
        other = ExponentExpr.of(other)
        if self.is_constant:
            return other.scale(self.constant)
        if other.is_constant:
            return self.scale(other.constant)
        raise NonAffineExponent(f"product ({self})*({other}) is not affine in the orders")

    __rmul__ = __mul__

    def __truediv__(self, other: ExponentLike) -> ExponentExpr:
        other = ExponentExpr.of(other)
        if not other.is_constant or other.constant == 0:
            raise NonAffineExponent(f"cannot divide by ({other})")
        return self.scale(1 / other.constant)

    def substitute(self, assignments: Mapping[str, ExponentLike]) -> ExponentExpr:
        out = ExponentExpr(self.constant)
        for name, c in self.coeffs:
            if name in assignments:
                out = out + ExponentExpr.of(assignments[name]).scale(c)
            else:
                out = out + ExponentExpr.symbol(name, c)
        return out

    def evaluate(self, values: Mapping[str, float]) -> float:
        missing = self.symbols - set(values)
        if missing:
            raise UndeclaredName(f"no value for order symbol(s) {sorted(missing)}")
        return float(self.constant) + sum(float(c) * values[k] for k, c in self.coeffs)

    def __str__(self) -> str:
        parts: list[str] = []
        for name, c in self.coeffs:
            mag = abs(c)
            body = name if mag == 1 else f"{mag}*{name}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        if self.constant != 0 or not parts:
            c = self.constant
            if not parts:
                parts.append(str(c))
            else:
                parts.append(f"+{c}" if c > 0 else f"-{abs(c)}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"ExponentExpr({str(self)!r})"


ZERO = ExponentExpr()


@dataclass(frozen=True)
class Dimension:
    """Product of base units raised to affine exponents."""

    exponents: tuple[tuple[str, ExponentExpr], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[str, ExponentExpr] = {}
        for unit, e in self.exponents:
            if unit not in BASE_UNITS:
                raise ValueError(f"unknown base unit {unit!r}; expected one of {BASE_UNITS}")
            merged[unit] = merged.get(unit, ZERO) + ExponentExpr.of(e)
        canon = tuple((u, merged[u]) for u in BASE_UNITS if u in merged and not merged[u].is_zero)
        object.__setattr__(self, "exponents", canon)

    @classmethod
    def of(cls, **units: ExponentLike) -> Dimension:
        """``Dimension.of(L=1, T="-2*a")``."""
        return cls(tuple((u, ExponentExpr.of(e)) for u, e in units.items()))

    @classmethod
    def parse(cls, text: str, symbols: Iterable[str] | None = None) -> Dimension:
        return parse_dimension(text, symbols)

    def exponent(self, unit: str) -> ExponentExpr:
        return dict(self.exponents).get(unit, ZERO)

    @property
    def is_dimensionless(self) -> bool:
        return not self.exponents

    @property
    def symbols(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for _, e in self.exponents:
            out |= e.symbols
        return out

    def __mul__(self, other: Dimension) -> Dimension:
        return dim_mul(self, other)

    def __truediv__(self, other: Dimension) -> Dimension:
        return dim_mul(self, dim_pow(other, -1))

    def __pow__(self, q: ExponentLike) -> Dimension:
        return dim_pow(self, q)

    def substitute(self, assignments: Mapping[str, ExponentLike]) -> Dimension:
        return Dimension(tuple((u, e.substitute(assignments)) for u, e in self.exponents))

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        factors = []
        for unit, e in self.exponents:
            if e == ExponentExpr(1):
                factors.append(unit)
            elif e.is_constant and e.constant.denominator == 1 and e.constant > 0:
                factors.append(f"{unit}^{e.constant}")
            else:
                factors.append(f"{unit}^({e})")
        return "*".join(factors)

    def __repr__(self) -> str:
        return f"Dimension({str(self)!r})"


DIMENSIONLESS = Dimension()


def dim_mul(a: Dimension, b: Dimension) -> Dimension:
    return Dimension(a.exponents + b.exponents)


def dim_pow(a: Dimension, q: ExponentLike) -> Dimension:
    """Raise ``a`` to ``q``; raises :class:`NonAffineExponent` when a symbolic
    exponent of ``a`` would be multiplied by a symbolic ``q``."""
    q = ExponentExpr.of(q)
    return Dimension(tuple((u, e * q) for u, e in a.exponents))


# ---------------------------------------------------------------------------
# homogeneity


class VerdictKind(enum.Enum):
    HOMOGENEOUS_FOR_ALL_ORDERS = "HomogeneousForAllOrders"
    HOMOGENEOUS_ONLY_AT = "HomogeneousOnlyAt"
    INHOMOGENEOUS = "Inhomogeneous"

    def __str__(self) -> str:
        return self.value


@dataclass
class HomogeneityVerdict:
    kind: VerdictKind
    per_term: list[tuple[str, Dimension]] = field(default_factory=list)
    #: order symbol -> value making all terms agree. Constant whenever the
    #: system pins the symbol; affine in the remaining free symbols otherwise.
    assignments: dict[str, ExponentExpr] = field(default_factory=dict)
    outside_fractional_range: bool = False

    @property
    def homogeneous(self) -> bool:
        return self.kind is VerdictKind.HOMOGENEOUS_FOR_ALL_ORDERS

    def assignment_text(self) -> str:
        return ", ".join(f"{k} = {v}" for k, v in sorted(self.assignments.items()))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "assignments": {k: str(v) for k, v in sorted(self.assignments.items())},
            "outside_fractional_range": self.outside_fractional_range,
            "per_term": [{"term": t, "dimension": str(d)} for t, d in self.per_term],
        }

    def __str__(self) -> str:
        if self.kind is VerdictKind.HOMOGENEOUS_ONLY_AT:
            note = " (outside 0 < order < 1)" if self.outside_fractional_range else ""
            return f"{self.kind.value}({self.assignment_text()}){note}"
        return self.kind.value


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; the last column is the
    constant term and is never used as a pivot."""
    rows = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def solve_equal(
    dims: Sequence[Dimension], labels: Sequence[str] | None = None
) -> HomogeneityVerdict:
    """Decide for which order values all ``dims`` coincide.

    Every base-unit exponent of every term is equated with the first term's,
    and the resulting affine system is solved exactly.
    """
    if not dims:
        raise ValueError("solve_equal needs at least one dimension")
    labels = list(labels) if labels is not None else [f"term{i}" for i in range(len(dims))]
    per_term = list(zip(labels, dims))

    diffs: list[ExponentExpr] = []
    for d in dims[1:]:
        for unit in BASE_UNITS:
            e = d.exponent(unit) - dims[0].exponent(unit)
            if not e.is_zero:
                diffs.append(e)
    if not diffs:
        return HomogeneityVerdict(VerdictKind.HOMOGENEOUS_FOR_ALL_ORDERS, per_term)

    symbols = sorted(set().union(*(e.symbols for e in diffs)))
    rows = [[e.coeff(s) for s in symbols] + [e.constant] for e in diffs]
    rows, pivots = _rref(rows, len(symbols))
    for row in rows[len(pivots):]:
        if row[-1] != 0:
            return HomogeneityVerdict(VerdictKind.INHOMOGENEOUS, per_term)

    free = [s for i, s in enumerate(symbols) if i not in pivots]
    assignments: dict[str, ExponentExpr] = {}
    for row, pc in zip(rows, pivots):
        # symbol + sum(c_f * free) + const = 0
        value = ExponentExpr(-row[-1])
        for fi, s in enumerate(symbols):
            if s in free and row[fi] != 0:
                value = value + ExponentExpr.symbol(s, -row[fi])
        assignments[symbols[pc]] = value
    outside = any(v.is_constant and not (0 < v.constant < 1) for v in assignments.values())
    return HomogeneityVerdict(
        VerdictKind.HOMOGENEOUS_ONLY_AT, per_term, assignments, outside_fractional_range=outside
    )


# ---------------------------------------------------------------------------
# literal syntax

SymbolCheck = Callable[[str], bool]


def parse_affine_tokens(ts: TokenStream, is_symbol: SymbolCheck | None = None) -> ExponentExpr:
    """affine := aterm {("+"|"-") aterm}; aterm := unary {("*"|"/") unary};
    unary := ("-"|"+") unary | NUM | IDENT | "(" affine ")"."""

    def affine() -> ExponentExpr:
        out = aterm()
        while ts.at("+") or ts.at("-"):
            op = ts.next().text
            rhs = aterm()
            out = out + rhs if op == "+" else out - rhs
        return out

    def aterm() -> ExponentExpr:
        out = unary()
        while ts.at("*") or ts.at("/"):
            op_tok = ts.next()
            rhs = unary()
            try:
                out = out * rhs if op_tok.text == "*" else out / rhs
            except NonAffineExponent as exc:
                ts.error(str(exc), op_tok)
        return out

    def unary() -> ExponentExpr:
        if ts.accept("-"):
            return -unary()
        if ts.accept("+"):
            return unary()
        tok = ts.peek()
        if tok.kind == "num":
            ts.next()
            return ExponentExpr(tok.value)
        if tok.kind == "ident":
            ts.next()
            if is_symbol is not None and not is_symbol(tok.text):
                raise UndeclaredName(
                    f"{tok.text!r} is not a declared order symbol (line {tok.line}, column {tok.column})"
                )
            return ExponentExpr.symbol(tok.text)
        if ts.accept("("):
            out = affine()
            ts.expect(")")
            return out
        ts.error(f"expected exponent, found {tok.text or 'end of input'!r}", tok)
        raise AssertionError  # unreachable

    return affine()


def parse_power_suffix(ts: TokenStream, is_symbol: SymbolCheck | None) -> ExponentExpr | None:
    """``"^" "(" affine ")" | "^" ["-"] INT`` or nothing."""
    if not ts.accept("^"):
        return None
    if ts.accept("("):
        e = parse_affine_tokens(ts, is_symbol)
        ts.expect(")")
        return e
    neg = ts.accept("-")
    tok = ts.expect_kind("num", "integer exponent")
    if tok.value.denominator != 1 or "." in tok.text:
        ts.error("bare exponents must be integers; parenthesize rationals", tok)
    return ExponentExpr(-tok.value if neg else tok.value)


def parse_dimension_tokens(ts: TokenStream, is_symbol: SymbolCheck | None = None) -> Dimension:
    tok = ts.peek()
    if tok.kind == "num" and tok.text == "1":
        ts.next()
        return DIMENSIONLESS
    parts: list[tuple[str, ExponentExpr]] = []
    while True:
        tok = ts.expect_kind("ident", "base unit")
        if tok.text not in BASE_UNITS:
            ts.error(f"unknown base unit {tok.text!r}", tok)
        e = parse_power_suffix(ts, is_symbol)
        parts.append((tok.text, e if e is not None else ExponentExpr(1)))
        if not ts.accept("*"):
            break
    return Dimension(tuple(parts))


def parse_affine(text: str, symbols: Iterable[str] | None = None) -> ExponentExpr:
    allowed = None if symbols is None else set(symbols).__contains__
    ts = TokenStream(text)
    e = parse_affine_tokens(ts, allowed)
    ts.expect_eof()
    return e


def parse_dimension(text: str, symbols: Iterable[str] | None = None) -> Dimension:
    allowed = None if symbols is None else set(symbols).__contains__
    ts = TokenStream(text)
    d = parse_dimension_tokens(ts, allowed)
    ts.expect_eof()
    return d
