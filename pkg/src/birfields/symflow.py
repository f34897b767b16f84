"""Formal one-parameter flows: a symbol ring k(x)[t, s, E_t, E_s] and Mobius flows.

E_t is a formal exponential in the time variable t with a parameter kappa:
E_t(0) = 1, dE_t/dt = kappa*E_t, and E_t(t+s) = E_t*E_s.  Exponents of E may be
arbitrary scalars (the symbol generates a group algebra), which is what flows
of x*dx + gamma*y*dy need.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .scalars import Scalar
from .unipoly import UniRat

S0 = Scalar.zero()
S1 = Scalar.one()

# key: (t degree, s degree, E_t exponent, E_s exponent)
Key = Tuple[int, int, Scalar, Scalar]


class SymExpr:
    """Element of k(x)[t, s] ⊗ group algebra of E-symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Key, UniRat]] = None):
        clean: Dict[Key, UniRat] = {}
        if terms:
            for key, c in terms.items():
                c = UniRat.of(c)
                if not c.is_zero():
                    clean[key] = c
        self.terms = clean

    @staticmethod
    def of(v) -> "SymExpr":
        if isinstance(v, SymExpr):
            return v
        return SymExpr({(0, 0, S0, S0): UniRat.of(v)})

    @staticmethod
    def t() -> "SymExpr":
        return SymExpr({(1, 0, S0, S0): UniRat.of(1)})

    @staticmethod
    def s() -> "SymExpr":
        return SymExpr({(0, 1, S0, S0): UniRat.of(1)})

    @staticmethod
    def E(exponent=1, which: str = "t") -> "SymExpr":
        e = Scalar.of(exponent)
        if which == "t":
            return SymExpr({(0, 0, e, S0): UniRat.of(1)})
        return SymExpr({(0, 0, S0, e): UniRat.of(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit_term(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other):
        other = SymExpr.of(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            sc = out.get(k)
            s = c if sc is None else sc + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SymExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return SymExpr({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-SymExpr.of(other))

    def __rsub__(self, other):
        return SymExpr.of(other) - self

    def __mul__(self, other):
        other = SymExpr.of(other)
        out: Dict[Key, UniRat] = {}
        for (a1, b1, e1, f1), c1 in self.terms.items():
            for (a2, b2, e2, f2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2, e1 + e2, f1 + f2)
                prev = out.get(k)
                s = c1 * c2 if prev is None else prev + c1 * c2
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return SymExpr(out)

    __rmul__ = __mul__

    def divide_by_unit(self, other: "SymExpr") -> "SymExpr":
        """Division by a single-term unit c·t^0·E^α (t/s degrees must be 0)."""
        other = SymExpr.of(other)
        if len(other.terms) != 1:
            raise ValueError("unit division needs a single term")
        (a, b, e, f), c = next(iter(other.terms.items()))
        if a or b:
            raise ValueError("cannot invert positive powers of t or s")
        inv = c.inverse()
        return SymExpr({(a1, b1, e1 - e, f1 - f): c1 * inv
                        for (a1, b1, e1, f1), c1 in self.terms.items()})

    def d_dt(self, kappa: Scalar) -> "SymExpr":
        """Formal derivative in t; dE_t/dt = kappa·E_t."""
        out: Dict[Key, UniRat] = {}
        for (a, b, e, f), c in self.terms.items():
            if a:
                k = (a - 1, b, e, f)
                add = c * Scalar.of(a)
                prev = out.get(k)
                s = add if prev is None else prev + add
                if not s.is_zero():
                    out[k] = s
                elif k in out:
                    del out[k]
            coef = e * kappa
            if not coef.is_zero():
                k = (a, b, e, f)
                add = c * coef
                prev = out.get(k)
                s = add if prev is None else prev + add
                if not s.is_zero():
                    out[k] = s
                elif k in out:
                    del out[k]
        return SymExpr(out)

    def at_t0(self) -> "SymExpr":
        """Substitute t = 0 (so E_t = 1)."""
        out: Dict[Key, UniRat] = {}
        for (a, b, e, f), c in self.terms.items():
            if a:
                continue
            k = (0, b, S0, f)
            prev = out.get(k)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SymExpr(out)

    def rename_t_to_s(self) -> "SymExpr":
        return SymExpr({(0, a + b, S0, e + f): c
                        for (a, b, e, f), c in self.terms.items()})

    def shift_t_to_t_plus_s(self) -> "SymExpr":
        """Substitute t -> t+s and E_t -> E_t·E_s (the group-law substitution)."""
        from math import comb
        out = SymExpr()
        for (a, b, e, f), c in self.terms.items():
            base = SymExpr({(0, b, e, f + e): c})
            binom = SymExpr.of(0)
            for k in range(a + 1):
                binom = binom + SymExpr({(k, a - k, S0, S0): UniRat.of(comb(a, k))})
            if a == 0:
                binom = SymExpr.of(1)
            out = out + base * binom
        return out

    def constant_value(self) -> UniRat:
        if self.is_zero():
            return UniRat.of(0)
        if len(self.terms) == 1:
            (a, b, e, f), c = next(iter(self.terms.items()))
            if a == 0 and b == 0 and e.is_zero() and f.is_zero():
                return c
        raise ValueError(f"{self} is not a pure k(x) element")

    def __eq__(self, other):
        if not isinstance(other, (SymExpr, int, Scalar, UniRat)):
            return NotImplemented
        return self.terms == SymExpr.of(other).terms

    def __repr__(self):
        return f"SymExpr({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (a, b, e, f) in sorted(self.terms,
                                   key=lambda k: (k[0], k[1], k[2].sort_key(), k[3].sort_key())):
            c = self.terms[(a, b, e, f)]
            bits = []
            cs = str(c)
            if cs != "1" or (a == 0 and b == 0 and e.is_zero() and f.is_zero()):
                bits.append(f"({cs})" if "/" in cs or "+" in cs[1:] else cs)
            if a:
                bits.append("t" if a == 1 else f"t^{a}")
            if b:
                bits.append("s" if b == 1 else f"s^{b}")
            if not e.is_zero():
                bits.append("E" if e.is_one() else f"E^({e})")
            if not f.is_zero():
                bits.append("Es" if f.is_one() else f"Es^({f})")
            parts.append("*".join(bits) if bits else "1")
        return " + ".join(parts)


Matrix2 = List[List[SymExpr]]


def mat_mul(A: Matrix2, B: Matrix2) -> Matrix2:
    return [
        [A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]],
        [A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]],
    ]


def mat_eq(A: Matrix2, B: Matrix2) -> bool:
    return all(A[i][j] == B[i][j] for i in range(2) for j in range(2))


def mat_identity() -> Matrix2:
    one, zero = SymExpr.of(1), SymExpr.of(0)
    return [[one, zero], [zero, one]]


def mat_map(A: Matrix2, fn) -> Matrix2:
    return [[fn(A[0][0]), fn(A[0][1])], [fn(A[1][0]), fn(A[1][1])]]


def mat_is_identity_multiple(A: Matrix2) -> bool:
    if not A[0][1].is_zero() or not A[1][0].is_zero():
        return False
    return A[0][0] == A[1][1]


class FlowExpr:
    """Symbolic flow acting by Mobius transformations on x and on y.

    Vertical flows have x_matrix = identity.  kappa is the parameter of the
    exponential symbol E (dE/dt = kappa*E); kappa = 0 means no E appears.
    """

    __slots__ = ("x_matrix", "y_matrix", "kappa")

    def __init__(self, x_matrix: Matrix2, y_matrix: Matrix2, kappa: Scalar):
        self.x_matrix = x_matrix
        self.y_matrix = y_matrix
        self.kappa = Scalar.of(kappa)

    def at_zero_is_identity(self) -> bool:
        for M in (self.x_matrix, self.y_matrix):
            if not mat_is_identity_multiple(mat_map(M, lambda e: e.at_t0())):
                return False
        return True

    def derivative_field_components(self) -> Tuple[Tuple[UniRat, UniRat, UniRat],
                                                   Tuple[UniRat, UniRat, UniRat]]:
        """(alpha, beta, gamma) per variable v: d/dt|0 flow_v = alpha·v²+beta·v+gamma.

        Valid because the matrices are normalized to be the identity at t = 0.
        """
        out = []
        for M in (self.x_matrix, self.y_matrix):
            D = mat_map(M, lambda e: e.d_dt(self.kappa).at_t0())
            m11 = D[0][0].constant_value()
            m12 = D[0][1].constant_value()
            m21 = D[1][0].constant_value()
            m22 = D[1][1].constant_value()
            out.append((-m21, m11 - m22, m12))
        return out[0], out[1]

    def satisfies_group_law(self) -> bool:
        for M in (self.x_matrix, self.y_matrix):
            Ms = mat_map(M, lambda e: e.rename_t_to_s())
            Mts = mat_map(M, lambda e: e.shift_t_to_t_plus_s())
            if not mat_eq(mat_mul(M, Ms), Mts):
                return False
        return True

    def mobius_y_texts(self) -> str:
        M = self.y_matrix
        num = _lin_text(M[0][0], M[0][1], "y")
        den = _lin_text(M[1][0], M[1][1], "y")
        xpart = "x" if mat_is_identity_multiple(self.x_matrix) else self.mobius_x_text()
        return f"({xpart}, ({num})/({den}))"

    def mobius_x_text(self) -> str:
        M = self.x_matrix
        num = _lin_text(M[0][0], M[0][1], "x")
        den = _lin_text(M[1][0], M[1][1], "x")
        return f"({num})/({den})"

    def __repr__(self):
        return f"FlowExpr{self.mobius_y_texts()}"


def _lin_text(a: SymExpr, b: SymExpr, var: str) -> str:
    if a.is_zero():
        return str(b)
    sa = str(a)
    head = var if sa == "1" else f"({sa})*{var}"
    if b.is_zero():
        return head
    return f"{head} + ({b})"


def mobius_flow_vertical_pullback(flow: FlowExpr, quad) -> Tuple[SymExpr, SymExpr, SymExpr]:
    """Pullback of (alpha·y² + beta·y + gamma)∂y by (x, Mobius_y(t)).

    Returns SymExpr coefficients (alpha', beta', gamma') of the transported
    quadratic; exact identity: result = [alpha(py+q)² + beta(py+q)(ry+s)
    + gamma(ry+s)²]/det.
    """
    alpha, beta, gamma = (SymExpr.of(UniRat.of(q)) for q in quad)
    M = flow.y_matrix
    p, q = M[0][0], M[0][1]
    r, s = M[1][0], M[1][1]
    det = p * s - q * r
    # quadratic in y: collect coefficients of y², y, 1
    a2 = alpha * p * p + beta * p * r + gamma * r * r
    a1 = alpha * 2 * p * q + beta * (p * s + q * r) + gamma * 2 * r * s
    a0 = alpha * q * q + beta * q * s + gamma * s * s
    if len(det.terms) != 1:
        raise ValueError("flow determinant is not a unit term")
    return (a2.divide_by_unit(det), a1.divide_by_unit(det), a0.divide_by_unit(det))
