"""Bivariate polynomials and reduced rational functions in (x, y) over Scalar.

Canonical form of a BiRat: gcd(num, den) = 1 and the denominator has leading
coefficient 1 in the graded lexicographic order with y > x.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Tuple

from .errors import DivisionByZero
from .scalars import Scalar
from .unipoly import UniPoly, UniRat, uni_gcd

S0 = Scalar.zero()
S1 = Scalar.one()

Mono = Tuple[int, int]  # (x exponent, y exponent)


def _grlex_key(mono: Mono):
    i, j = mono
    return (i + j, j, i)


class BiPoly:
    """Sparse dict {(i, j): Scalar} for sum c·x^i·y^j."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Mono, Scalar] | None = None):
        clean: Dict[Mono, Scalar] = {}
        if terms:
            for mono, c in terms.items():
                c = Scalar.of(c)
                if not c.is_zero():
                    clean[mono] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Mono, Scalar]) -> "BiPoly":
        out = cls.__new__(cls)
        out.terms = terms
        return out

    # -- constructors ------------------------------------------------------------

    @staticmethod
    def of(v) -> "BiPoly":
        if isinstance(v, BiPoly):
            return v
        if isinstance(v, (int, Scalar)):
            c = Scalar.of(v)
            return BiPoly({(0, 0): c})
        if isinstance(v, UniPoly):
            return BiPoly({(k, 0): c for k, c in enumerate(v.coeffs)})
        raise TypeError(f"cannot build BiPoly from {v!r}")

    @staticmethod
    def x(power: int = 1) -> "BiPoly":
        return BiPoly({(power, 0): S1})

    @staticmethod
    def y(power: int = 1) -> "BiPoly":
        return BiPoly({(0, power): S1})

    @staticmethod
    def from_y_coeffs(coeffs: Iterable[UniPoly]) -> "BiPoly":
        """Build sum coeffs[j](x)·y^j."""
        terms: Dict[Mono, Scalar] = {}
        for j, p in enumerate(coeffs):
            for i, c in enumerate(UniPoly.of(p).coeffs):
                if not c.is_zero():
                    terms[(i, j)] = c
        return BiPoly(terms)

    # -- structure ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def constant(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0, 0), S0)

    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def deg_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def leading_mono(self) -> Mono:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=_grlex_key)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_mono()]

    def y_coeffs(self) -> List[UniPoly]:
        """Coefficients as polynomials in x: index j gives the y^j coefficient."""
        dy = self.deg_y()
        if dy < 0:
            return []
        rows: List[Dict[int, Scalar]] = [dict() for _ in range(dy + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        out = []
        for row in rows:
            n = max(row, default=-1) + 1
            out.append(UniPoly([row.get(k, S0) for k in range(n)]))
        return out

    def x_coeffs(self) -> List[UniPoly]:
        """Coefficients as polynomials in y: index i gives the x^i coefficient."""
        return self.swap_vars().y_coeffs()

    def swap_vars(self) -> "BiPoly":
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()})

    def coeff(self, mono: Mono) -> Scalar:
        return self.terms.get(mono, S0)

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (BiPoly, UniPoly, int, Scalar)):
            return NotImplemented
        other = BiPoly.of(other)
        out = dict(self.terms)
        get = out.get
        for m, c in other.terms.items():
            prev = get(m)
            s = c if prev is None else prev + c
            if s.is_zero():
                if prev is not None:
                    del out[m]
            else:
                out[m] = s
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (BiPoly, UniPoly, int, Scalar)):
            return NotImplemented
        return self + (-BiPoly.of(other))

    def __rsub__(self, other):
        return BiPoly.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, (BiPoly, UniPoly, int, Scalar)):
            return NotImplemented
        if isinstance(other, Scalar):
            if other.is_zero():
                return BiPoly()
            return BiPoly._raw({m: c * other for m, c in self.terms.items()})
        other = BiPoly.of(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Mono, Scalar] = {}
        get = out.get
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                m = (i1 + i2, j1 + j2)
                prev = get(m)
                s = c1 * c2 if prev is None else prev + c1 * c2
                if s.is_zero():
                    if prev is not None:
                        del out[m]
                else:
                    out[m] = s
        return BiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BiPoly.of(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: Scalar) -> "BiPoly":
        return self * Scalar.of(c)

    def diff_x(self) -> "BiPoly":
        return BiPoly({(i - 1, j): c * i for (i, j), c in self.terms.items() if i})

    def diff_y(self) -> "BiPoly":
        return BiPoly({(i, j - 1): c * j for (i, j), c in self.terms.items() if j})

    def eval_y(self, v: Scalar) -> UniPoly:
        """Substitute y = v (a Scalar)."""
        acc: Dict[int, Scalar] = {}
        for (i, j), c in self.terms.items():
            acc[i] = acc.get(i, S0) + c * (Scalar.of(v) ** j)
        n = max(acc, default=-1) + 1
        return UniPoly([acc.get(k, S0) for k in range(n)])

    def subst(self, sx, sy):
        """Substitute x and y by BiRat values; returns a BiRat."""
        sx, sy = BiRat.of(sx), BiRat.of(sy)
        acc = BiRat.zero()
        # Horner over y, inner Horner over x, to limit blowup.
        rows = self.y_coeffs()
        for row in reversed(rows):
            inner = BiRat.zero()
            for c in reversed(row.coeffs):
                inner = inner * sx + BiRat.of(c)
            acc = acc * sy + inner
        return acc

    def __eq__(self, other):
        if not isinstance(other, (BiPoly, UniPoly, int, Scalar)):
            return NotImplemented
        return self.terms == BiPoly.of(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"BiPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        monos = sorted(self.terms, key=_grlex_key, reverse=True)
        parts = []
        for m in monos:
            i, j = m
            c = self.terms[m]
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            cs = str(c)
            if not factors:
                if "+" in cs[1:] or "-" in cs[1:]:
                    cs = f"({cs})"
                parts.append(cs)
                continue
            body = "*".join(factors)
            if c.is_one():
                parts.append(body)
            elif c == Scalar.of(-1):
                parts.append(f"-{body}")
            else:
                if "+" in cs[1:] or "-" in cs[1:]:
                    cs = f"({cs})"
                parts.append(f"{cs}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


# -- gcd machinery (content/primitive-part recursion in y over k[x]) ------------


def _uni_content(ps: List[UniPoly]) -> UniPoly:
    g = UniPoly()
    for p in ps:
        g = uni_gcd(g, p) if not g.is_zero() else p.monic()
        if g.is_constant() and not g.is_zero():
            return UniPoly([S1])
    return g if not g.is_zero() else UniPoly()


def _bipoly_from_urows(rows: List[UniPoly]) -> BiPoly:
    return BiPoly.from_y_coeffs(rows)


def _content_y(p: BiPoly) -> UniPoly:
    """gcd in k[x] of the y-coefficients."""
    rows = [r for r in p.y_coeffs() if not r.is_zero()]
    if not rows:
        return UniPoly()
    return _uni_content(rows)


def _divide_rows_by(p: BiPoly, c: UniPoly) -> BiPoly:
    rows = [(r.divmod(c))[0] for r in p.y_coeffs()]
    return _bipoly_from_urows(rows)


def _pseudo_rem_y(a: BiPoly, b: BiPoly) -> BiPoly:
    """Pseudo-remainder of a by b viewed in (k[x])[y]."""
    db = b.deg_y()
    lb = b.y_coeffs()[db]
    r = a
    while not r.is_zero() and r.deg_y() >= db:
        dr = r.deg_y()
        lr = r.y_coeffs()[dr]
        r = r * BiPoly.of(lb) - b * BiPoly.from_y_coeffs(
            [UniPoly()] * (dr - db) + [lr]
        )
        # strip numerical drift: exact arithmetic, nothing to do
    return r


def bi_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """GCD via content/primitive-part recursion; result has monic grlex lead."""
    if a.is_zero():
        return _normalize_lead(b)
    if b.is_zero():
        return _normalize_lead(a)
    if a.deg_y() == 0 and b.deg_y() == 0:
        return BiPoly.of(uni_gcd(a.y_coeffs()[0], b.y_coeffs()[0]))
    ca, cb = _content_y(a), _content_y(b)
    pa, pb = _divide_rows_by(a, ca), _divide_rows_by(b, cb)
    cg = uni_gcd(ca, cb)
    # primitive Euclid in (k[x])[y] with pseudo-division
    u, v = pa, pb
    if u.deg_y() < v.deg_y():
        u, v = v, u
    while not v.is_zero():
        r = _pseudo_rem_y(u, v)
        if not r.is_zero():
            cr = _content_y(r)
            r = _divide_rows_by(r, cr)
        u, v = v, r
    g = BiPoly.of(cg) * u if not u.is_zero() else BiPoly.of(cg)
    return _normalize_lead(g)


def _normalize_lead(p: BiPoly) -> BiPoly:
    if p.is_zero():
        return p
    lead = p.leading_coeff()
    if lead.is_one():
        return p
    return p * lead.inverse()


def bi_divexact(a: BiPoly, b: BiPoly) -> BiPoly:
    """Exact division a/b in k[x,y]; raises ValueError if not divisible."""
    if b.is_zero():
        raise DivisionByZero("exact division by zero polynomial")
    if a.is_zero():
        return BiPoly()
    if b.deg_y() == 0:
        brow = b.y_coeffs()[0]
        rows = []
        for r in a.y_coeffs():
            q, rem = r.divmod(brow)
            if not rem.is_zero():
                raise ValueError("not divisible")
            rows.append(q)
        return _bipoly_from_urows(rows)
    # long division in (k(x))[y] with UniRat coefficients
    rows_a = [UniRat(r) for r in a.y_coeffs()]
    rows_b = [UniRat(r) for r in b.y_coeffs()]
    db = len(rows_b) - 1
    lead_b = rows_b[db]
    quot: List[UniRat] = [UniRat(0)] * (max(len(rows_a) - db, 0))
    rem = rows_a[:]
    while len(rem) - 1 >= db and any(not r.is_zero() for r in rem):
        while rem and rem[-1].is_zero():
            rem.pop()
        if len(rem) - 1 < db:
            break
        dr = len(rem) - 1
        c = rem[dr] / lead_b
        quot[dr - db] = c
        for k in range(db + 1):
            rem[dr - db + k] = rem[dr - db + k] - c * rows_b[k]
    if any(not r.is_zero() for r in rem):
        raise ValueError("not divisible")
    rows_q = []
    for c in quot:
        if not c.is_polynomial():
            raise ValueError("not divisible")
        rows_q.append(c.poly())
    return _bipoly_from_urows(rows_q)


class BiRat:
    """Reduced bivariate rational function with grlex-normalized denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = BiPoly.of(num)
        den = BiPoly.of(den if den is not None else 1)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = BiPoly.of(1)
            elif not den.is_constant():
                g = bi_gcd(num, den)
                if not g.is_constant():
                    num = bi_divexact(num, g)
                    den = bi_divexact(den, g)
            lead = den.leading_coeff()
            if not lead.is_one():
                inv = lead.inverse()
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def of(v) -> "BiRat":
        if isinstance(v, BiRat):
            return v
        if isinstance(v, UniRat):
            return BiRat(BiPoly.of(v.num), BiPoly.of(v.den))
        return BiRat(BiPoly.of(v))

    @staticmethod
    def zero() -> "BiRat":
        return BiRat(BiPoly(), BiPoly.of(1), _reduced=True)

    @staticmethod
    def one() -> "BiRat":
        return BiRat.of(1)

    @staticmethod
    def x(power: int = 1) -> "BiRat":
        if power >= 0:
            return BiRat(BiPoly.x(power), BiPoly.of(1), _reduced=True)
        return BiRat(BiPoly.of(1), BiPoly.x(-power), _reduced=True)

    @staticmethod
    def y(power: int = 1) -> "BiRat":
        if power >= 0:
            return BiRat(BiPoly.y(power), BiPoly.of(1), _reduced=True)
        return BiRat(BiPoly.of(1), BiPoly.y(-power), _reduced=True)

    # -- structure --------------------------------------------------------------

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

    def poly(self) -> BiPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not polynomial")
        return self.num

    def deg_x(self) -> Tuple[int, int]:
        return (self.num.deg_x(), self.den.deg_x())

    def deg_y(self) -> Tuple[int, int]:
        return (self.num.deg_y(), self.den.deg_y())

    def depends_on_y(self) -> bool:
        return self.num.deg_y() > 0 or self.den.deg_y() > 0

    def depends_on_x(self) -> bool:
        return self.num.deg_x() > 0 or self.den.deg_x() > 0

    def as_unirat_in_x(self) -> UniRat:
        if self.depends_on_y():
            raise ValueError(f"{self} depends on y")
        nrows = self.num.y_coeffs()
        drows = self.den.y_coeffs()
        return UniRat(nrows[0] if nrows else UniPoly(),
                      drows[0] if drows else UniPoly())

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        other = BiRat.of(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        d1c, d2c = d1.is_constant(), d2.is_constant()
        if d1c and d2c:
            return BiRat(n1 + n2, BiPoly.of(1))
        if d1c:
            # gcd(n1·d2 + n2, d2) = gcd(n2, d2) = 1
            return BiRat(n1 * d2 + n2, d2, _reduced=True)
        if d2c:
            return BiRat(n1 + n2 * d1, d1, _reduced=True)
        if d1 == d2:
            return BiRat(n1 + n2, d1)
        g = bi_gcd(d1, d2)
        if g.is_constant():
            return BiRat(n1 * d2 + n2 * d1, d1 * d2, _reduced=True)
        d1r = bi_divexact(d1, g)
        d2r = bi_divexact(d2, g)
        t = n1 * d2r + n2 * d1r
        if t.is_zero():
            return BiRat.zero()
        h = bi_gcd(t, g)
        if not h.is_constant():
            t = bi_divexact(t, h)
            g = bi_divexact(g, h)
        den = g * d1r * d2r
        lead = den.leading_coeff()
        if not lead.is_one():
            inv = lead.inverse()
            t, den = t * inv, den * inv
        return BiRat(t, den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return BiRat(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-BiRat.of(other))

    def __rsub__(self, other):
        return BiRat.of(other) - self

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if other.is_zero():
                return BiRat.zero()
            return BiRat(self.num * other, self.den, _reduced=True)
        other = BiRat.of(other)
        if self.is_zero() or other.is_zero():
            return BiRat.zero()
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if not d2.is_constant():
            g1 = bi_gcd(n1, d2)
            if not g1.is_constant():
                n1 = bi_divexact(n1, g1)
                d2 = bi_divexact(d2, g1)
        if not d1.is_constant():
            g2 = bi_gcd(n2, d1)
            if not g2.is_constant():
                n2 = bi_divexact(n2, g2)
                d1 = bi_divexact(d1, g2)
        num = n1 * n2
        den = d1 * d2
        lead = den.leading_coeff()
        if not lead.is_one():
            inv = lead.inverse()
            num, den = num * inv, den * inv
        return BiRat(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "BiRat":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        lead = den.leading_coeff()
        if not lead.is_one():
            inv = lead.inverse()
            num, den = num * inv, den * inv
        return BiRat(num, den, _reduced=True)

    def __truediv__(self, other):
        return self * BiRat.of(other).inverse()

    def __rtruediv__(self, other):
        return BiRat.of(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return BiRat.one()
        # coprimality is preserved by powers in a UFD
        return BiRat(self.num**n, self.den**n, _reduced=True)

    def diff_x(self) -> "BiRat":
        return BiRat(self.num.diff_x() * self.den - self.num * self.den.diff_x(),
                     self.den * self.den)

    def diff_y(self) -> "BiRat":
        return BiRat(self.num.diff_y() * self.den - self.num * self.den.diff_y(),
                     self.den * self.den)

    def subst(self, sx, sy) -> "BiRat":
        sx, sy = BiRat.of(sx), BiRat.of(sy)
        n = self.num.subst(sx, sy)
        d = self.den.subst(sx, sy)
        if d.is_zero():
            raise DivisionByZero("substitution lands on the zero denominator")
        return n / d

    def __eq__(self, other):
        if not isinstance(other, (BiRat, BiPoly, UniPoly, UniRat, int, Scalar)):
            return NotImplemented
        other = BiRat.of(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"BiRat({self})"

    def __str__(self):
        if self.is_polynomial() and self.den.constant().is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def normalize(f: BiRat) -> BiRat:
    """Canonical reduced representative (idempotent)."""
    return BiRat(f.num, f.den)
