"""Rational vector fields on chart-tagged surfaces and their primitives.

Everything here is exact: brackets, pullbacks, polar divisors, tangency and
first-integral tests all reduce to polynomial identities.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bipoly import BiPoly, BiRat, bi_divexact, bi_gcd
from .errors import (ConstantIntegral, NotBirational, SurfaceMismatch)

from .scalars import Scalar
from .surfaces import P2, SurfaceModel
from .unipoly import UniPoly, uni_squarefree_decomposition

S0 = Scalar.zero()
S1 = Scalar.one()


class VectorField:
    """px(x,y)·d/dx + py(x,y)·d/dy on a fixed surface chart."""

    __slots__ = ("surface", "px", "py")

    def __init__(self, surface: SurfaceModel, px, py):
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "px", BiRat.of(px))
        object.__setattr__(self, "py", BiRat.of(py))

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @staticmethod
    def vertical(surface: SurfaceModel, h) -> "VectorField":
        return VectorField(surface, BiRat.zero(), h)

    def is_zero(self) -> bool:
        return self.px.is_zero() and self.py.is_zero()

    def is_vertical(self) -> bool:
        return self.px.is_zero()

    def retag(self, surface: SurfaceModel) -> "VectorField":
        """Same components on another chart (the standard identification)."""
        return VectorField(surface, self.px, self.py)

    def apply_to(self, f: BiRat) -> BiRat:
        """Directional derivative X(f)."""
        return self.px * f.diff_x() + self.py * f.diff_y()

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_surface(self, other)
        return VectorField(self.surface, self.px + other.px, self.py + other.py)

    def __sub__(self, other: "VectorField") -> "VectorField":
        _same_surface(self, other)
        return VectorField(self.surface, self.px - other.px, self.py - other.py)

    def __neg__(self) -> "VectorField":
        return VectorField(self.surface, -self.px, -self.py)

    def scale(self, c) -> "VectorField":
        c = Scalar.of(c)
        return VectorField(self.surface, self.px * c, self.py * c)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (self.surface == other.surface
                and self.px == other.px and self.py == other.py)

    def __hash__(self):
        return hash((self.surface, self.px, self.py))

    def __repr__(self):
        return f"VectorField({self.surface}, ({self.px}) d/dx + ({self.py}) d/dy)"


def _same_surface(a: VectorField, b: VectorField):
    if a.surface != b.surface:
        raise SurfaceMismatch(f"{a.surface} vs {b.surface}")


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y] with components X(Y^i) - Y(X^i)."""
    _same_surface(X, Y)
    return VectorField(
        X.surface,
        X.apply_to(Y.px) - Y.apply_to(X.px),
        X.apply_to(Y.py) - Y.apply_to(X.py),
    )


def wedge_collinear(X: VectorField, Y: VectorField) -> bool:
    _same_surface(X, Y)
    return (X.px * Y.py - X.py * Y.px).is_zero()


class BirationalMap:
    """A dominant rational map in coordinates, with an optional stored inverse."""

    __slots__ = ("surface_from", "surface_to", "f1", "f2", "_inverse",
                 "_parents", "vertical_matrix")

    def __init__(self, surface_from: SurfaceModel, surface_to: SurfaceModel,
                 f1, f2, inverse: Optional[Tuple[BiRat, BiRat]] = None,
                 parents=None, vertical_matrix=None):
        object.__setattr__(self, "surface_from", surface_from)
        object.__setattr__(self, "surface_to", surface_to)
        object.__setattr__(self, "f1", BiRat.of(f1))
        object.__setattr__(self, "f2", BiRat.of(f2))
        object.__setattr__(self, "_inverse", inverse)
        object.__setattr__(self, "_parents", parents)
        # fibration-preserving maps (x, Mobius_y) carry their PGL2(k(x)) matrix
        object.__setattr__(self, "vertical_matrix", vertical_matrix)

    def __setattr__(self, name, value):
        raise AttributeError("BirationalMap is immutable")

    @staticmethod
    def identity(surface: SurfaceModel) -> "BirationalMap":
        x, y = BiRat.x(), BiRat.y()
        return BirationalMap(surface, surface, x, y, inverse=(x, y))

    def jacobian_det(self) -> BiRat:
        return (self.f1.diff_x() * self.f2.diff_y()
                - self.f1.diff_y() * self.f2.diff_x())

    def apply(self, g: BiRat) -> BiRat:
        """Composition g∘f."""
        return g.subst(self.f1, self.f2)

    def apply_point(self, p: Tuple[Scalar, Scalar]) -> Tuple[Scalar, Scalar]:
        px = self.f1.subst(BiRat.of(p[0]), BiRat.of(p[1]))
        py = self.f2.subst(BiRat.of(p[0]), BiRat.of(p[1]))
        return (px.constant(), py.constant())

    def compose(self, other: "BirationalMap") -> "BirationalMap":
        """self∘other: first apply other, then self.  The composite inverse is
        derived lazily from the factors when it is actually requested."""
        if other.surface_to != self.surface_from:
            raise SurfaceMismatch("maps do not chain")
        f1 = other.apply(self.f1)
        f2 = other.apply(self.f2)
        return BirationalMap(other.surface_from, self.surface_to, f1, f2,
                             parents=(self, other))

    def inverse(self) -> "BirationalMap":
        if self._inverse is not None:
            g1, g2 = self._inverse
            return BirationalMap(self.surface_to, self.surface_from, g1, g2,
                                 inverse=(self.f1, self.f2))
        if self._parents is not None:
            outer, inner = self._parents
            oi = outer.inverse()
            ii = inner.inverse()
            inv = (oi.apply(ii.f1), oi.apply(ii.f2))
            object.__setattr__(self, "_inverse", inv)
            return BirationalMap(self.surface_to, self.surface_from,
                                 inv[0], inv[1], inverse=(self.f1, self.f2))
        inv = _invert_mobius_elimination(self.f1, self.f2)
        if inv is None:
            raise NotBirational(
                "inverse not found by Mobius-in-one-variable elimination; "
                "supply it explicitly"
            )
        object.__setattr__(self, "_inverse", inv)
        return BirationalMap(self.surface_to, self.surface_from, inv[0], inv[1],
                             inverse=(self.f1, self.f2))

    def with_inverse(self, g1, g2) -> "BirationalMap":
        return BirationalMap(self.surface_from, self.surface_to,
                             self.f1, self.f2, (BiRat.of(g1), BiRat.of(g2)))

    def is_identity(self) -> bool:
        return self.f1 == BiRat.x() and self.f2 == BiRat.y()

    def __repr__(self):
        return f"BirationalMap({self.surface_from}->{self.surface_to}: ({self.f1}, {self.f2}))"


def _mobius_split(f: BiRat, var: str):
    """Write f = (A·v + B)/(C·v + D) in the variable var, coefficients in the
    other variable; returns (A, B, C, D) as BiRats or None."""
    degn = f.num.deg_y() if var == "y" else f.num.deg_x()
    degd = f.den.deg_y() if var == "y" else f.den.deg_x()
    if degn > 1 or degd > 1 or (degn <= 0 and degd <= 0):
        return None
    if var == "y":
        nrows = f.num.y_coeffs()
        drows = f.den.y_coeffs()
        mk = lambda p: BiRat(BiPoly.of(p))
    else:
        nrows = f.num.x_coeffs()
        drows = f.den.x_coeffs()
        mk = lambda p: BiRat(BiPoly.of(p).swap_vars())
    A = mk(nrows[1]) if len(nrows) > 1 else BiRat.zero()
    B = mk(nrows[0]) if nrows else BiRat.zero()
    C = mk(drows[1]) if len(drows) > 1 else BiRat.zero()
    D = mk(drows[0]) if drows else BiRat.zero()
    if (A * D - B * C).is_zero():
        return None
    return A, B, C, D


def _solve_mobius(f: BiRat, var: str, value: BiRat) -> Optional[BiRat]:
    """Solve f(·, var) = value for var; returns the solution or None."""
    split = _mobius_split(f, var)
    if split is None:
        return None
    A, B, C, D = split
    den = A - value * C
    if den.is_zero():
        return None
    return (value * D - B) / den


def _invert_mobius_elimination(f1: BiRat, f2: BiRat):
    """Try to invert (f1, f2) by solving one component for one variable and
    substituting into the other.  Returns (g1, g2) with g∘f = id or None."""
    u, v = BiRat.x(), BiRat.y()
    for first, second, out_first in ((f1, f2, True), (f2, f1, False)):
        target_first = u if out_first else v
        target_second = v if out_first else u
        for var in ("y", "x"):
            sol = _solve_mobius(first, var, target_first)
            if sol is None:
                continue
            # substitute: second component as a function of (other variable, u)
            if var == "y":
                composed = second.subst(BiRat.x(), sol)
                other = "x"
            else:
                composed = second.subst(sol, BiRat.y())
                other = "y"
            sol2 = _solve_mobius(composed, other, target_second)
            if sol2 is None:
                continue
            if var == "y":
                gx = sol2
                gy = sol.subst(sol2, BiRat.y())
            else:
                gy = sol2
                gx = sol.subst(BiRat.x(), sol2)
            # verify g∘f = id
            if (gx.subst(f1, f2) == BiRat.x()) and (gy.subst(f1, f2) == BiRat.y()):
                return (gx, gy)
    return None


def pullback(Y: VectorField, f: BirationalMap) -> VectorField:
    """f*Y = (Df)^{-1}·(Y∘f), a field on the source surface of f."""
    if Y.surface != f.surface_to:
        raise SurfaceMismatch(f"field lives on {Y.surface}, map lands on {f.surface_to}")
    a = f.f1.diff_x()
    b = f.f1.diff_y()
    c = f.f2.diff_x()
    d = f.f2.diff_y()
    det = a * d - b * c
    if det.is_zero():
        raise NotBirational("Jacobian determinant vanishes identically")
    p = f.apply(Y.px)
    q = f.apply(Y.py)
    new_px = (d * p - b * q) / det
    new_py = (-c * p + a * q) / det
    return VectorField(f.surface_from, new_px, new_py)


def pushforward(Y: VectorField, f: BirationalMap) -> VectorField:
    """f_*Y = (f^{-1})*Y, a field on the target surface of f."""
    return pullback(Y, f.inverse())


class Divisor:
    """Formal sum of (squarefree polynomial component, multiplicity)."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Tuple[BiPoly, int]] = ()):
        comps = [(p, int(m)) for p, m in components if m != 0]
        object.__setattr__(self, "components", tuple(comps))

    def __setattr__(self, name, value):
        raise AttributeError("Divisor is immutable")

    def is_empty(self) -> bool:
        return not self.components

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return set((str(p), m) for p, m in self.components) == \
               set((str(p), m) for p, m in other.components)

    def __repr__(self):
        if self.is_empty():
            return "Divisor(0)"
        return "Divisor(" + " + ".join(
            (f"{m}*" if m != 1 else "") + f"{{{p}=0}}" for p, m in self.components
        ) + ")"


def _factor_bipoly(p: BiPoly) -> List[Tuple[BiPoly, int]]:
    """Best-effort factorization into coprime components with multiplicities.

    Splits off the x-only content, runs Yun's squarefree decomposition on each
    part (in the variable it actually involves) and extracts linear factors of
    univariate pieces when they exist over the active field.
    """
    out: List[Tuple[BiPoly, int]] = []
    if p.is_zero() or p.is_constant():
        return out
    if p.deg_y() == 0:
        upoly = p.y_coeffs()[0]
        for f, m in uni_squarefree_decomposition(upoly):
            for g in _split_unipoly(f):
                out.append((BiPoly.of(g), m))
        return out
    if p.deg_x() == 0:
        swapped = _factor_bipoly(p.swap_vars())
        return [(q.swap_vars(), m) for q, m in swapped]
    from .unipoly import uni_gcd as _ug
    content = None
    for row in p.y_coeffs():
        if row.is_zero():
            continue
        content = row.monic() if content is None else _ug(content, row)
        if content.is_constant():
            break
    if content is not None and not content.is_constant():
        out.extend(_factor_bipoly(BiPoly.of(content)))
        p = bi_divexact(p, BiPoly.of(content))
        if p.is_constant():
            return out
    # squarefree split in y over k(x) via gcd with the y-derivative
    rest = p
    mult = 1
    while not rest.is_constant():
        g = bi_gcd(rest, rest.diff_y())
        sqfree = bi_divexact(rest, g) if not g.is_constant() else rest
        if not sqfree.is_constant():
            piece = sqfree if g.is_constant() else bi_divexact(sqfree, bi_gcd(sqfree, g))
            if not piece.is_constant():
                out.append((piece, mult))
        if g.is_constant():
            break
        rest = g
        mult += 1
    return _merge_coprime(out)


def _merge_coprime(items: List[Tuple[BiPoly, int]]):
    merged: List[Tuple[BiPoly, int]] = []
    for q, m in items:
        for idx, (q2, m2) in enumerate(merged):
            if q == q2:
                merged[idx] = (q2, max(m, m2))
                break
        else:
            merged.append((q, m))
    return merged


def _split_unipoly(f: UniPoly) -> List[UniPoly]:
    """Split a squarefree univariate polynomial into linear factors where roots
    exist in the coefficient field; remaining factor kept whole."""
    from .scalars import gaussian_sqrt
    f = f.monic()
    out: List[UniPoly] = []
    # pull out x = 0 roots
    while not f.is_zero() and f.coeff(0).is_zero() and f.degree() > 0:
        out.append(UniPoly.x())
        f = f.divmod(UniPoly.x())[0]
    if f.degree() == 1:
        out.append(f)
        return out
    if f.degree() == 2:
        b, c = f.coeff(1), f.coeff(0)
        disc = b * b - Scalar.of(4) * c
        r = gaussian_sqrt(disc) if disc.is_gaussian() else None
        if r is not None:
            r1 = (-b + r) / 2
            r2 = (-b - r) / 2
            out.append(UniPoly([-r1, S1]))
            out.append(UniPoly([-r2, S1]))
            return out
    if f.degree() > 0:
        out.append(f)
    return out


def polar_divisor(X: VectorField) -> Divisor:
    """Divisor of denominators of the reduced components, max multiplicity."""
    comps: List[Tuple[BiPoly, int]] = []
    for den in (X.px.den, X.py.den):
        comps.extend(_factor_bipoly(den))
    return Divisor(_merge_coprime(comps))


def _clear_component(X: VectorField, q: BiPoly) -> Tuple[BiRat, BiRat]:
    """Multiply X by the minimal power of q clearing q from both denominators."""
    qk = BiRat(q)
    px, py = X.px, X.py
    for _ in range(64):
        if not (_den_divisible(px, q) or _den_divisible(py, q)):
            return px, py
        px, py = px * qk, py * qk
    raise RuntimeError("pole order too large")


def _den_divisible(f: BiRat, q: BiPoly) -> bool:
    if f.is_zero():
        return False
    return not bi_gcd(f.den, q).is_constant()


def polar_tangency_check(X: VectorField) -> bool:
    """True iff every polar component is invariant by the foliation of X.

    Necessary for birational integrability: a component {q=0} transverse to
    the foliation forces a multivalued local flow.
    """
    for q, _m in polar_divisor(X):
        ptilde, qtilde = _clear_component(X, q)
        val = ptilde * BiRat(q.diff_x()) + qtilde * BiRat(q.diff_y())
        if val.is_zero():
            continue
        if not val.is_polynomial():
            # discard poles along other components: only divisibility by q matters
            val = BiRat(val.num)
        try:
            bi_divexact(val.num, q)
        except ValueError:
            return False
    return True


def first_integral_check(X: VectorField, F, factored=None) -> bool:
    """True iff X(F) = 0.  `factored` may give [(BiPoly, exponent)] for a
    monomial-type F, checked via the logarithmic derivative."""
    if factored is not None:
        acc = BiRat.zero()
        for q, e in factored:
            q = BiRat.of(q)
            acc = acc + Scalar.of(e) * X.apply_to(q) / q
        return acc.is_zero()
    F = BiRat.of(F)
    if F.is_constant():
        raise ConstantIntegral("first integral candidates must be non-constant")
    return X.apply_to(F).is_zero()


# -- membership in the catalog spans -----------------------------------------


def autp2_basis(surface: SurfaceModel = P2) -> List[VectorField]:
    x, y = BiRat.x(), BiRat.y()
    zero = BiRat.zero()
    mk = lambda px, py: VectorField(surface, px, py)
    R1 = x * x
    return [
        mk(BiRat.one(), zero),        # d/dx
        mk(zero, BiRat.one()),        # d/dy
        mk(x, zero),                  # x d/dx
        mk(zero, y),                  # y d/dy
        mk(y, zero),                  # y d/dx
        mk(zero, x),                  # x d/dy
        mk(x * x, x * y),             # x(x d/dx + y d/dy)
        mk(x * y, y * y),             # y(x d/dx + y d/dy)
    ]


def autfn_basis(n: int, surface: SurfaceModel | None = None) -> List[VectorField]:
    if surface is None:
        surface = SurfaceModel.fn(n)
    x, y = BiRat.x(), BiRat.y()
    zero = BiRat.zero()
    mk = lambda px, py: VectorField(surface, px, py)
    if n == 0:
        return [
            mk(BiRat.one(), zero), mk(x, zero), mk(x * x, zero),
            mk(zero, BiRat.one()), mk(zero, y), mk(zero, y * y),
        ]
    half_n = Scalar.of(Fraction(n, 2))
    out = [
        mk(BiRat.one(), zero),
        mk(x, y * half_n),
        mk(x * x, x * y * Scalar.of(n)),
        mk(zero, y),
    ]
    out.extend(mk(zero, x**k) for k in range(n + 1))
    return out


def borel_basis(n: int, surface: SurfaceModel | None = None) -> List[VectorField]:
    if surface is None:
        surface = SurfaceModel.fn(n)
    x = BiRat.x()
    zero = BiRat.zero()
    mk = lambda px, py: VectorField(surface, px, py)
    out = [mk(BiRat.one(), zero), mk(x, zero)]
    out.extend(mk(zero, x**k) for k in range(n + 1))
    out.append(mk(zero, BiRat.y()))
    return out


def membership(X: VectorField, space: str, n: int | None = None):
    """Test X against AutP2 / AutFn(n) / BorelBn(n); returns (bool, coeffs)."""
    if space == "AutP2":
        if not X.surface.is_p2():
            raise SurfaceMismatch("AutP2 membership needs a P2-tagged field")
        basis = autp2_basis(X.surface)
    elif space == "AutFn":
        if not X.surface.is_fn() or (n is not None and X.surface.n != n):
            raise SurfaceMismatch("AutFn membership needs the matching Fn tag")
        basis = autfn_basis(X.surface.n, X.surface)
    elif space == "BorelBn":
        if not X.surface.is_fn() or (n is not None and X.surface.n != n):
            raise SurfaceMismatch("BorelBn membership needs the matching Fn tag")
        basis = borel_basis(X.surface.n, X.surface)
    else:
        raise ValueError(f"unknown space {space!r}")
    return field_in_span(basis, X)


def field_in_span(basis: Sequence[VectorField], X: VectorField):
    """(True, coefficient vector) when X = sum c_k basis[k], else (False, None)."""
    from .errors import NoSolution
    try:
        sol = _solve_two_component([ (B.px, B.py) for B in basis ], (X.px, X.py))
    except NoSolution:
        return False, None
    return True, sol


def _solve_two_component(gens: Sequence[Tuple[BiRat, BiRat]],
                         target: Tuple[BiRat, BiRat]):
    """Solve sum c_k·(p_k, q_k) = (P, Q) componentwise with shared c."""
    from .linsolve import solve_linear
    rows: List[List[Scalar]] = []
    rhs: List[Scalar] = []
    for comp in (0, 1):
        entries = [g[comp] for g in gens] + [target[comp]]
        distinct: List[BiPoly] = []
        for e in entries:
            if e.den.is_constant():
                continue
            if all(e.den != d for d in distinct):
                distinct.append(e.den)
        full = BiPoly.of(1)
        for d in distinct:
            full = full * d
        def clear(e: BiRat) -> BiPoly:
            prod = BiPoly.of(1)
            skipped = False
            for d in distinct:
                if e.den == d and not skipped:
                    skipped = True
                    continue
                prod = prod * d
            out = e.num * prod
            if e.den.is_constant():
                c = e.den.constant()
                if not c.is_one():
                    out = out * c.inverse()
                out = out * full if distinct else out
            return out
        cleared = [clear(g[comp]) for g in gens]
        t_num = clear(target[comp])
        monos = set()
        for p in cleared:
            monos.update(p.terms)
        monos.update(t_num.terms)
        for m in sorted(monos):
            rows.append([p.coeff(m) for p in cleared])
            rhs.append(t_num.coeff(m))
    if not rows:
        return [S0] * len(gens)
    sol, _ = solve_linear(rows, rhs)
    return sol
