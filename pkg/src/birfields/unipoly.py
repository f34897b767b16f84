"""Univariate polynomials and reduced rational functions in x over Scalar."""

from __future__ import annotations

from typing import List, Optional, Sequence

from .errors import DivisionByZero
from .scalars import Scalar

S0 = Scalar.zero()
S1 = Scalar.one()


class UniPoly:
    """Dense coefficient list, lowest degree first; normalized (no top zeros)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Scalar.of(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def of(v) -> "UniPoly":
        if isinstance(v, UniPoly):
            return v
        if isinstance(v, (int, Scalar)):
            return UniPoly([Scalar.of(v)])
        if isinstance(v, (list, tuple)):
            return UniPoly(v)
        raise TypeError(f"cannot build UniPoly from {v!r}")

    @staticmethod
    def x(power: int = 1) -> "UniPoly":
        return UniPoly([S0] * power + [S1])

    def degree(self) -> int:
        """Degree, with deg 0 = -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else S0

    def leading(self) -> Scalar:
        if self.is_zero():
            return S0
        return self.coeffs[-1]

    def coeff(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return S0

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead.is_one():
            return self
        inv = lead.inverse()
        return UniPoly([c * inv for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, (UniPoly, int, Scalar)):
            return NotImplemented
        other = UniPoly.of(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, (UniPoly, int, Scalar)):
            return NotImplemented
        return self + (-UniPoly.of(other))

    def __rsub__(self, other):
        return UniPoly.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, (UniPoly, int, Scalar)):
            return NotImplemented
        if isinstance(other, Scalar):
            other = UniPoly([other])
        other = UniPoly.of(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [S0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly([S1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "UniPoly"):
        other = UniPoly.of(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = UniPoly()
        r = self
        inv_lead = other.leading().inverse()
        while not r.is_zero() and r.degree() >= other.degree():
            k = r.degree() - other.degree()
            c = r.leading() * inv_lead
            t = UniPoly([S0] * k + [c])
            q = q + t
            r = r - t * other
        return q, r

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self) -> "UniPoly":
        return UniPoly([self.coeffs[k] * k for k in range(1, len(self.coeffs))])

    def eval(self, v):
        """Horner evaluation; v may be a Scalar or anything with * and +."""
        if not self.coeffs:
            return S0
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * v + c
        return acc

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + UniPoly([c])
        return acc

    def __eq__(self, other):
        if not isinstance(other, (UniPoly, int, Scalar)):
            return NotImplemented
        return self.coeffs == UniPoly.of(other).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            if k == 0:
                terms.append(f"({c})" if "+" in str(c) or "-" in str(c)[1:] else str(c))
            else:
                xs = "x" if k == 1 else f"x^{k}"
                if c.is_one():
                    terms.append(xs)
                elif c == Scalar(-1):
                    terms.append(f"-{xs}")
                else:
                    cs = str(c)
                    if "+" in cs or "-" in cs[1:]:
                        cs = f"({cs})"
                    terms.append(f"{cs}*{xs}")
        out = terms[0]
        for t in terms[1:]:
            out += t if t.startswith("-") else "+" + t
        return out


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm (coefficients form a field)."""
    a, b = UniPoly.of(a), UniPoly.of(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def uni_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly()
    return ((a * b) // uni_gcd(a, b)).monic()


def uni_squarefree_decomposition(p: UniPoly) -> List[tuple]:
    """Yun's algorithm: [(factor, multiplicity)] with factors pairwise coprime."""
    p = p.monic()
    if p.degree() <= 0:
        return []
    out = []
    g = uni_gcd(p, p.derivative())
    w = p // g
    mult = 1
    while w.degree() > 0:
        y = uni_gcd(w, g)
        f = w // y
        if f.degree() > 0:
            out.append((f.monic(), mult))
        w, g = y, g // y
        mult += 1
    return out


class UniRat:
    """Reduced fraction of UniPolys with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = UniPoly.of(num)
        den = UniPoly.of(den if den is not None else 1)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = UniPoly([S1])
            else:
                g = uni_gcd(num, den)
                if g.degree() > 0:
                    num, den = num // g, den // g
            lead = den.leading()
            if not lead.is_one():
                inv = lead.inverse()
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @staticmethod
    def of(v) -> "UniRat":
        if isinstance(v, UniRat):
            return v
        return UniRat(UniPoly.of(v))

    @staticmethod
    def x() -> "UniRat":
        return UniRat(UniPoly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def poly(self) -> UniPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not polynomial")
        return self.num

    def __add__(self, other):
        if not isinstance(other, (UniRat, UniPoly, int, Scalar)):
            return NotImplemented
        other = UniRat.of(other)
        return UniRat(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return UniRat(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, (UniRat, UniPoly, int, Scalar)):
            return NotImplemented
        return self + (-UniRat.of(other))

    def __rsub__(self, other):
        return UniRat.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, (UniRat, UniPoly, int, Scalar)):
            return NotImplemented
        if isinstance(other, Scalar):
            return UniRat(self.num * other, self.den)
        other = UniRat.of(other)
        return UniRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "UniRat":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return UniRat(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, (UniRat, UniPoly, int, Scalar)):
            return NotImplemented
        return self * UniRat.of(other).inverse()

    def __rtruediv__(self, other):
        return UniRat.of(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return UniRat(self.num**n, self.den**n)

    def derivative(self) -> "UniRat":
        return UniRat(self.num.derivative() * self.den
                      - self.num * self.den.derivative(),
                      self.den * self.den)

    def eval(self, v: Scalar) -> Scalar:
        dv = self.den.eval(v)
        if isinstance(dv, Scalar) and dv.is_zero():
            raise DivisionByZero(f"pole at {v}")
        return self.num.eval(v) / dv

    def __eq__(self, other):
        if not isinstance(other, (UniRat, UniPoly, int, Scalar)):
            return NotImplemented
        other = UniRat.of(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"UniRat({self})"

    def __str__(self):
        if self.den == UniPoly([S1]):
            return str(self.num)
        return f"({self.num})/({self.den})"
