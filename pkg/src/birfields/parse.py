"""Recursive-descent parser for field, map and function expressions.

Grammar (tokens: x, y, i, sqrt(<rational>), integers, + - * / ^, parens):

    field   := term ("+"|"-") term ...   where each term ends in d/dx or d/dy
    expr    := sum of products of powers of atoms
    map     := "(" expr "," expr ")"

parse(print(v)) = v holds on canonical forms; errors carry the position.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .bipoly import BiRat
from .errors import DegreeOverflow, ExprSyntaxError
from .fields import BirationalMap, VectorField
from .scalars import FieldContext, PLAIN_CONTEXT, Scalar
from .surfaces import SurfaceModel

DEFAULT_DEGREE_BOUND = 64


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"{self.kind}({self.text})"


def _tokenize(src: str) -> List[_Tok]:
    toks: List[_Tok] = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if src.startswith("d/dx", i):
            toks.append(_Tok("ddx", "d/dx", i))
            i += 4
            continue
        if src.startswith("d/dy", i):
            toks.append(_Tok("ddy", "d/dy", i))
            i += 4
            continue
        if src.startswith("sqrt", i):
            toks.append(_Tok("sqrt", "sqrt", i))
            i += 4
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(_Tok("int", src[i:j], i))
            i = j
            continue
        if c in "xyi":
            toks.append(_Tok(c, c, i))
            i += 1
            continue
        if c in "+-*/^(),":
            toks.append(_Tok(c, c, i))
            i += 1
            continue
        if c.isalpha():
            raise ExprSyntaxError(f"unknown symbol {c!r} at position {i}", position=i)
        raise ExprSyntaxError(f"unexpected character {c!r} at position {i}", position=i)
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str, ctx: FieldContext = PLAIN_CONTEXT,
                 degree_bound: int = DEFAULT_DEGREE_BOUND):
        self.src = src
        self.toks = _tokenize(src)
        self.k = 0
        self.ctx = ctx
        self.degree_bound = degree_bound

    def peek(self) -> _Tok:
        return self.toks[self.k]

    def next(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.next()
        if t.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r} but found {t.text!r} at position {t.pos}",
                position=t.pos)
        return t

    def _check_degree(self, v: BiRat) -> BiRat:
        if (v.num.total_degree() > self.degree_bound
                or v.den.total_degree() > self.degree_bound):
            raise DegreeOverflow(
                f"total degree exceeds the bound {self.degree_bound}")
        return v

    # expression := term (("+"|"-") term)*
    def expr(self) -> BiRat:
        t = self.peek()
        if t.kind == "+":
            self.next()
        acc = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return self._check_degree(acc)

    # term := factor (("*"|"/") factor)*, with juxtaposition not allowed
    def term(self) -> BiRat:
        acc = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.next().kind
            rhs = self.factor()
            acc = acc * rhs if op == "*" else acc / rhs
        return self._check_degree(acc)

    # factor := ("-")* power
    def factor(self) -> BiRat:
        neg = False
        while self.peek().kind == "-":
            self.next()
            neg = not neg
        v = self.power()
        return -v if neg else v

    # power := atom ("^" ("-")? int)?
    def power(self) -> BiRat:
        v = self.atom()
        if self.peek().kind == "^":
            self.next()
            sign = 1
            if self.peek().kind == "-":
                self.next()
                sign = -1
            e = int(self.expect("int").text) * sign
            v = v**e
        return self._check_degree(v)

    def atom(self) -> BiRat:
        t = self.next()
        if t.kind == "int":
            return BiRat.of(Scalar.of(int(t.text)))
        if t.kind == "x":
            return BiRat.x()
        if t.kind == "y":
            return BiRat.y()
        if t.kind == "i":
            return BiRat.of(Scalar.i())
        if t.kind == "sqrt":
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            if not inner.is_constant():
                raise ExprSyntaxError(
                    f"sqrt of a non-constant at position {t.pos}", position=t.pos)
            c = inner.constant()
            from .scalars import sqrt_in_context
            r = sqrt_in_context(c, self.ctx)
            if r is None:
                raise ExprSyntaxError(
                    f"sqrt({c}) does not lie in the active constant field "
                    f"(pass --extension d={c})", position=t.pos)
            return BiRat.of(r)
        if t.kind == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ExprSyntaxError(
            f"unexpected token {t.text!r} at position {t.pos}", position=t.pos)


def parse_expr(text: str, ctx: FieldContext = PLAIN_CONTEXT,
               degree_bound: int = DEFAULT_DEGREE_BOUND) -> BiRat:
    p = _Parser(text, ctx, degree_bound)
    v = p.expr()
    p.expect("end")
    return v


def parse_field(text: str, surface: SurfaceModel,
                ctx: FieldContext = PLAIN_CONTEXT,
                degree_bound: int = DEFAULT_DEGREE_BOUND) -> VectorField:
    """Parse `expr d/dx [± expr d/dy]` (components in either order)."""
    p = _Parser(text, ctx, degree_bound)
    px = BiRat.zero()
    py = BiRat.zero()
    seen = set()
    sign = 1
    while True:
        if p.peek().kind in ("ddx", "ddy"):
            coeff = BiRat.one()
        else:
            coeff = p.expr()
        t = p.next()
        if t.kind == "ddx":
            if "x" in seen:
                raise ExprSyntaxError("duplicate d/dx component", position=t.pos)
            px = coeff if sign > 0 else -coeff
            seen.add("x")
        elif t.kind == "ddy":
            if "y" in seen:
                raise ExprSyntaxError("duplicate d/dy component", position=t.pos)
            py = coeff if sign > 0 else -coeff
            seen.add("y")
        else:
            raise ExprSyntaxError(
                f"expected d/dx or d/dy at position {t.pos}", position=t.pos)
        nxt = p.next()
        if nxt.kind == "end":
            break
        if nxt.kind == "+":
            sign = 1
        elif nxt.kind == "-":
            sign = -1
        else:
            raise ExprSyntaxError(
                f"expected + or - between components at position {nxt.pos}",
                position=nxt.pos)
    return VectorField(surface, px, py)


def parse_map(text: str, surface_from: SurfaceModel, surface_to: SurfaceModel,
              ctx: FieldContext = PLAIN_CONTEXT,
              degree_bound: int = DEFAULT_DEGREE_BOUND) -> BirationalMap:
    """Parse `(expr, expr)` into a birational map."""
    p = _Parser(text, ctx, degree_bound)
    p.expect("(")
    f1 = p.expr()
    p.expect(",")
    f2 = p.expr()
    p.expect(")")
    p.expect("end")
    return BirationalMap(surface_from, surface_to, f1, f2)


# -- printing (inverse of the parser on canonical forms) -------------------------


def print_scalar(c: Scalar) -> str:
    return str(c)


def print_birat(v: BiRat) -> str:
    num = _print_poly(v.num)
    if v.is_polynomial() and v.den.constant().is_one():
        return num
    return f"({num})/({_print_poly(v.den)})"


def _print_poly(p) -> str:
    from .bipoly import _grlex_key
    if p.is_zero():
        return "0"
    parts = []
    for mono in sorted(p.terms, key=_grlex_key, reverse=True):
        i, j = mono
        c = p.terms[mono]
        factors = []
        if i:
            factors.append("x" if i == 1 else f"x^{i}")
        if j:
            factors.append("y" if j == 1 else f"y^{j}")
        cs = _print_coeff(c)
        if not factors:
            parts.append(cs)
        elif cs == "1":
            parts.append("*".join(factors))
        elif cs == "-1":
            parts.append("-" + "*".join(factors))
        else:
            parts.append(cs + "*" + "*".join(factors))
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _print_coeff(c: Scalar) -> str:
    txt = _scalar_expr(c)
    if ("+" in txt[1:]) or ("-" in txt[1:]):
        return f"({txt})"
    return txt


def _scalar_expr(c: Scalar) -> str:
    parts = []
    if c.re or not (c.im or c.sre or c.sim):
        parts.append(_frac_txt(c.re))
    if c.im:
        parts.append(_frac_coeff(c.im, "i"))
    if c.sre or c.sim:
        d_re, d_im = c.d
        if d_im:
            inner = f"{_frac_txt(d_re)}+{_frac_coeff(d_im, 'i')}"
        else:
            inner = _frac_txt(d_re)
        gen = f"sqrt({inner})"
        if c.sre:
            parts.append(_frac_coeff(c.sre, gen))
        if c.sim:
            parts.append(_frac_coeff(c.sim, f"i*{gen}"))
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _frac_txt(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _frac_coeff(f: Fraction, sym: str) -> str:
    if f == 1:
        return sym
    if f == -1:
        return f"-{sym}"
    return f"{_frac_txt(f)}*{sym}"


def print_field(X: VectorField) -> str:
    parts = []
    if not X.px.is_zero():
        parts.append(f"({print_birat(X.px)}) d/dx")
    if not X.py.is_zero():
        parts.append(f"({print_birat(X.py)}) d/dy")
    if not parts:
        return "(0) d/dy"
    return " + ".join(parts)


def print_map(f: BirationalMap) -> str:
    return f"({print_birat(f.f1)}, {print_birat(f.f2)})"
