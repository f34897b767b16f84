"""Finite-dimensional Lie algebra analysis over the exact field: structure
constants, solvability and semisimplicity verdicts, the two-dimensional
classification and sl2-triple completion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bipoly import BiPoly, BiRat
from .errors import (NoSolution, NotAnAlgebra, NotClosed, NotIndependent,
                     SurfaceMismatch, Unclassified)
from .fields import (BirationalMap, VectorField, _solve_two_component,
                     field_in_span, lie_bracket, pullback, wedge_collinear)
from .linsolve import solve_linear
from .scalars import Scalar
from .surfaces import SurfaceModel
from .unipoly import UniPoly, UniRat

S0 = Scalar.zero()
S1 = Scalar.one()


# -- presentations ---------------------------------------------------------------


@dataclass
class AlgebraPresentation:
    dim: int
    constants: List[List[List[Scalar]]]          # c[i][j][k]
    basis: Optional[List[VectorField]] = None     # concrete presentations only
    name: Optional[str] = None

    def bracket_coeffs(self, i: int, j: int) -> List[Scalar]:
        return self.constants[i][j]

    def ad_matrix(self, i: int) -> List[List[Scalar]]:
        """(ad e_i) as a dim x dim matrix: column j holds [e_i, e_j]."""
        n = self.dim
        return [[self.constants[i][j][k] for j in range(n)] for k in range(n)]

    def bracket_vectors(self, u: List[Scalar], v: List[Scalar]) -> List[Scalar]:
        n = self.dim
        out = [S0] * n
        for i in range(n):
            if u[i].is_zero():
                continue
            row = self.constants[i]
            for j in range(n):
                if v[j].is_zero():
                    continue
                cij = row[j]
                f = u[i] * v[j]
                for k in range(n):
                    if not cij[k].is_zero():
                        out[k] = out[k] + f * cij[k]
        return out

    def validate(self):
        n = self.dim
        c = self.constants
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[i][j][k] != -c[j][i][k]:
                        raise ValueError("structure constants not antisymmetric")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = [S0] * n
                    for m_ in range(n):
                        for l in range(n):
                            acc[l] = (acc[l]
                                      + c[j][k][m_] * c[i][m_][l]
                                      + c[k][i][m_] * c[j][m_][l]
                                      + c[i][j][m_] * c[k][m_][l])
                    if any(not v.is_zero() for v in acc):
                        raise ValueError(f"Jacobi fails at ({i},{j},{k})")
        if self.basis is not None:
            for i in range(n):
                for j in range(i + 1, n):
                    lhs = lie_bracket(self.basis[i], self.basis[j])
                    rhs = _combine(self.basis, c[i][j])
                    if lhs != rhs:
                        raise ValueError(f"concrete bracket mismatch at ({i},{j})")
        return self


def _combine(basis: Sequence[VectorField], coeffs: Sequence[Scalar]) -> VectorField:
    out = VectorField(basis[0].surface, BiRat.zero(), BiRat.zero())
    for B, c in zip(basis, coeffs):
        if not c.is_zero():
            out = out + B.scale(c)
    return out


def structure_constants(basis: Sequence[VectorField]) -> AlgebraPresentation:
    """Exact structure tensor of a closed independent span of fields.

    Raises NotIndependent when the fields are linearly dependent over the
    constants and NotClosed (with the offending bracket) when some [e_i, e_j]
    leaves the span.
    """
    basis = list(basis)
    n = len(basis)
    if n == 0:
        raise ValueError("empty basis")
    surface = basis[0].surface
    for B in basis:
        if B.surface != surface:
            raise SurfaceMismatch("mixed surfaces in a basis")
    if _span_rank(basis) < n:
        raise NotIndependent("fields are linearly dependent")
    constants = [[[S0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = lie_bracket(basis[i], basis[j])
            try:
                sol = _solve_two_component([(B.px, B.py) for B in basis],
                                           (br.px, br.py))
            except NoSolution:
                raise NotClosed(
                    f"bracket of basis elements {i} and {j} leaves the span",
                    witness=br)
            constants[i][j] = sol
            constants[j][i] = [-c for c in sol]
    return AlgebraPresentation(dim=n, constants=constants, basis=basis)


def _span_rank(fields: Sequence[VectorField]) -> int:
    indep: List[VectorField] = []
    for X in fields:
        if X.is_zero():
            continue
        if not indep:
            indep.append(X)
            continue
        ok, _ = field_in_span(indep, X)
        if not ok:
            indep.append(X)
    return len(indep)


def _independent_subset(fields: Sequence[VectorField]) -> List[VectorField]:
    indep: List[VectorField] = []
    for X in fields:
        if X.is_zero():
            continue
        if not indep:
            indep.append(X)
            continue
        ok, _ = field_in_span(indep, X)
        if not ok:
            indep.append(X)
    return indep


def derived_series(A: AlgebraPresentation):
    """Dimensions g ⊇ g^(1) ⊇ ... until stabilization; bases included for
    concrete presentations (as fields) and abstract ones (as coefficient
    vectors)."""
    if A.basis is not None:
        current = list(A.basis)
        dims = [len(current)]
        bases = [current]
        while True:
            brackets = []
            for i in range(len(current)):
                for j in range(i + 1, len(current)):
                    brackets.append(lie_bracket(current[i], current[j]))
            nxt = _independent_subset(brackets)
            dims.append(len(nxt))
            bases.append(nxt)
            if len(nxt) == 0 or len(nxt) == len(current):
                break
            current = nxt
        return dims, bases
    n = A.dim
    current = _unit_vectors(n)
    dims = [n]
    bases = [current]
    while True:
        brackets = []
        for i in range(len(current)):
            for j in range(i + 1, len(current)):
                brackets.append(A.bracket_vectors(current[i], current[j]))
        nxt = _independent_vectors(brackets)
        dims.append(len(nxt))
        bases.append(nxt)
        if len(nxt) == 0 or len(nxt) == len(current):
            break
        current = nxt
    return dims, bases


def _unit_vectors(n: int) -> List[List[Scalar]]:
    return [[S1 if i == k else S0 for i in range(n)] for k in range(n)]


def _independent_vectors(vecs: List[List[Scalar]]) -> List[List[Scalar]]:
    indep: List[List[Scalar]] = []
    for v in vecs:
        if all(c.is_zero() for c in v):
            continue
        if not indep:
            indep.append(v)
            continue
        try:
            solve_linear([list(r) for r in zip(*indep)], v)
        except NoSolution:
            indep.append(v)
    return indep


def is_solvable_dims(dims: List[int]) -> bool:
    return dims[-1] == 0


@dataclass
class KillingReport:
    matrix: List[List[Scalar]]
    det: Scalar
    is_semisimple: bool
    is_solvable: bool


def killing_report(A: AlgebraPresentation) -> KillingReport:
    """Killing form kappa(e_i, e_j) = tr(ad e_i · ad e_j); semisimple iff
    det != 0, solvable by Cartan's criterion kappa(g, g^(1)) = 0 cross-checked
    against derived-series termination."""
    n = A.dim
    ads = [A.ad_matrix(i) for i in range(n)]
    killing = [[_trace_prod(ads[i], ads[j]) for j in range(n)] for i in range(n)]
    det = _det_n(killing)
    semisimple = not det.is_zero()
    dims, bases = derived_series(A)
    term_solvable = is_solvable_dims(dims)
    # Cartan: kappa(g, [g,g]) = 0
    if A.basis is not None:
        pres_for_vectors = structure_constants(A.basis)
        A_abs = pres_for_vectors
    else:
        A_abs = A
    d1 = _derived_vectors(A_abs)
    cartan_solvable = True
    for i in range(n):
        row = killing[i]
        for w in d1:
            val = sum((row[k] * w[k] for k in range(n)), S0)
            if not val.is_zero():
                cartan_solvable = False
                break
        if not cartan_solvable:
            break
    if cartan_solvable != term_solvable:
        raise RuntimeError("Cartan criterion disagrees with the derived series")
    return KillingReport(matrix=killing, det=det,
                         is_semisimple=semisimple, is_solvable=term_solvable)


def _derived_vectors(A: AlgebraPresentation) -> List[List[Scalar]]:
    units = _unit_vectors(A.dim)
    brackets = []
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            brackets.append(A.bracket_vectors(units[i], units[j]))
    return _independent_vectors(brackets)


def _trace_prod(M: List[List[Scalar]], N: List[List[Scalar]]) -> Scalar:
    n = len(M)
    out = S0
    for i in range(n):
        Mi = M[i]
        for k in range(n):
            a = Mi[k]
            if a.is_zero():
                continue
            b = N[k][i]
            if not b.is_zero():
                out = out + a * b
    return out


def _det_n(M: List[List[Scalar]]) -> Scalar:
    n = len(M)
    A = [list(row) for row in M]
    det = S1
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            return S0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        inv = A[col][col].inverse()
        for r in range(col + 1, n):
            if A[r][col].is_zero():
                continue
            f = A[r][col] * inv
            A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det


def verify_sl2_triple(X: VectorField, Y: VectorField, Z: VectorField) -> bool:
    """Exact check of [X,Y] = X, [Z,Y] = -Z, [X,Z] = 2Y."""
    return (lie_bracket(X, Y) == X
            and lie_bracket(Z, Y) == -Z
            and lie_bracket(X, Z) == Y.scale(Scalar.of(2)))


# -- two-dimensional classification ----------------------------------------------


@dataclass
class TwoDimLabel:
    kind: str              # a00 | a01 | a11 | cgamma | d | fn | CollinearAbelian | CollinearAffine
    gamma: Optional[Scalar] = None
    n: Optional[int] = None
    h: Optional[UniRat] = None

    def __repr__(self):
        if self.kind == "cgamma":
            return f"cgamma({self.gamma})"
        if self.kind == "fn":
            return f"fn({self.n})"
        if self.kind == "CollinearAbelian":
            return f"CollinearAbelian(h={self.h})"
        return self.kind


@dataclass
class TwoDimResult:
    label: TwoDimLabel
    chain: BirationalMap
    landed: Tuple[VectorField, VectorField]
    surface: SurfaceModel
    target_surface: Optional[SurfaceModel] = None

    def model_basis(self) -> List[VectorField]:
        return two_dim_model_basis(self.label, self.surface)


def two_dim_model_basis(label: TwoDimLabel, surface: SurfaceModel) -> List[VectorField]:
    x, y = BiRat.x(), BiRat.y()
    one, zero = BiRat.one(), BiRat.zero()
    mk = lambda px, py: VectorField(surface, px, py)
    if label.kind == "a00":
        return [mk(one, zero), mk(zero, one)]
    if label.kind == "a01":
        return [mk(one, zero), mk(zero, y)]
    if label.kind == "a11":
        return [mk(x, zero), mk(zero, y)]
    if label.kind == "cgamma":
        return [mk(x, y * label.gamma), mk(zero, one)]
    if label.kind == "d":
        return [mk(one, y), mk(zero, one)]
    if label.kind == "fn":
        n = label.n
        return [mk(x, y * Scalar.of(n) + x**n), mk(zero, one)]
    if label.kind == "CollinearAbelian":
        return [mk(zero, one), mk(zero, BiRat.of(label.h))]
    if label.kind == "CollinearAffine":
        return [mk(zero, one), mk(zero, y)]
    raise ValueError(f"no model basis for {label}")


def _swap_map(surface) -> BirationalMap:
    x, y = BiRat.x(), BiRat.y()
    return BirationalMap(surface, surface, y, x, inverse=(y, x))


def _shear_map_rat(surface, q: UniRat) -> BirationalMap:
    qb = BiRat(BiPoly.of(q.num), BiPoly.of(q.den))
    return BirationalMap(surface, surface, BiRat.x(), BiRat.y() + qb,
                         inverse=(BiRat.x(), BiRat.y() - qb))


def _spans_equal(a: Sequence[VectorField], b: Sequence[VectorField]) -> bool:
    return (all(field_in_span(list(a), f)[0] for f in b)
            and all(field_in_span(list(b), f)[0] for f in a))


def classify_2dim(X: VectorField, Y: VectorField) -> TwoDimResult:
    """Classification of a 2-dimensional algebra span{X, Y} onto the catalog
    of holomorphic models over a rational base.

    The witness chain psi satisfies psi*(span) = model span exactly; inputs
    needing moves beyond x-translations, rescalings, shears and the coordinate
    swap raise Unclassified.
    """
    if X.surface != Y.surface:
        raise SurfaceMismatch("fields live on different surfaces")
    surface = X.surface
    if _span_rank([X, Y]) < 2:
        raise NotAnAlgebra("span is not 2-dimensional")
    W = lie_bracket(X, Y)
    if W.is_zero():
        alpha = beta = S0
    else:
        try:
            sol = _solve_two_component([(X.px, X.py), (Y.px, Y.py)], (W.px, W.py))
        except NoSolution:
            raise NotAnAlgebra("bracket escapes the span")
        alpha, beta = sol
    abelian = alpha.is_zero() and beta.is_zero()
    collinear = wedge_collinear(X, Y)
    if collinear:
        return _classify_collinear(X, Y, W, abelian, alpha, beta)
    return _classify_noncollinear(X, Y, W, abelian, alpha, beta)


def _eqlie_pair(X, Y, W, alpha, beta) -> Tuple[VectorField, VectorField]:
    """(X', Y') in the span with [X', Y'] = X' (affine case)."""
    if not alpha.is_zero():
        return W, Y.scale(alpha.inverse())
    return W, X.scale(-beta.inverse())


def _classify_collinear(X, Y, W, abelian, alpha, beta) -> TwoDimResult:
    surface = X.surface
    chain = BirationalMap.identity(surface)
    pair = (X, Y)
    if X.is_vertical() and Y.is_vertical():
        pass
    elif X.py.is_zero() and Y.py.is_zero():
        mp = _swap_map(surface)
        pair = (pullback(X, mp), pullback(Y, mp))
        chain = mp
    else:
        raise Unclassified("collinear pair is neither vertical nor horizontal")
    Xv, Yv = pair
    if abelian:
        base = Xv
        other = Yv
        rep = _regularize_vertical_translation(base)
        if rep is None:
            base, other = Yv, Xv
            rep = _regularize_vertical_translation(base)
        if rep is None:
            raise Unclassified("no basis member regularizes to d/dy")
        mp = rep
        chain = chain.compose(mp) if not chain.is_identity() else mp
        b2 = pullback(base, mp)
        o2 = pullback(other, mp)
        if not (b2 == VectorField.vertical(surface, BiRat.one())):
            raise Unclassified("regularization did not land on d/dy")
        h = o2.py
        if h.depends_on_y():
            raise Unclassified("commuting partner is not a function of the base")
        hu = h.as_unirat_in_x()
        label = TwoDimLabel("CollinearAbelian", h=hu)
        deg = max(hu.num.degree(), hu.den.degree(), 0)
        return TwoDimResult(label=label, chain=chain, landed=(b2, o2),
                            surface=surface,
                            target_surface=SurfaceModel.fn(deg))
    # affine collinear: normalize the derived generator to d/dy
    Xp, Yp = _eqlie_pair(Xv, Yv, lie_bracket(Xv, Yv), *_affine_coeffs(Xv, Yv))
    rep = _regularize_vertical_translation(Xp)
    if rep is None:
        raise Unclassified("derived generator is not regularizable to d/dy")
    chain = chain.compose(rep) if not chain.is_identity() else rep
    X2 = pullback(Xp, rep)
    Y2 = pullback(Yp, rep)
    # Y2 = (y + r(x))·d/dy; shear away r
    r = Y2.py - BiRat.y()
    if r.depends_on_y():
        raise Unclassified("affine partner has unexpected shape")
    mp = _shear_map_rat(surface, (-r).as_unirat_in_x())
    chain = chain.compose(mp)
    X3, Y3 = pullback(X2, mp), pullback(Y2, mp)
    label = TwoDimLabel("CollinearAffine")
    return TwoDimResult(label=label, chain=chain, landed=(X3, Y3),
                        surface=surface)


def _affine_coeffs(X, Y):
    W = lie_bracket(X, Y)
    sol = _solve_two_component([(X.px, X.py), (Y.px, Y.py)], (W.px, W.py))
    return sol[0], sol[1]


def _regularize_vertical_translation(Xv: VectorField) -> Optional[BirationalMap]:
    """Conjugation of an integrable vertical field with kappa = 0 onto d/dy."""
    from .integrability import integrability_test
    if not Xv.is_vertical() or Xv.is_zero():
        return None
    rep = integrability_test(Xv)
    if not rep.integrable or not rep.kappa.is_zero():
        return None
    return rep.conjugating_map


def _borel_shape(X: VectorField) -> Optional[Tuple[UniPoly, Scalar, UniPoly]]:
    """(px linear poly, y-coefficient, x-part of py) when X sits in a Borel."""
    if X.px.depends_on_y() or not X.px.is_polynomial():
        return None
    pxp = X.px.as_unirat_in_x()
    if not pxp.is_polynomial() or pxp.poly().degree() > 1:
        return None
    if not X.py.is_polynomial():
        return None
    pyn = X.py.num
    if pyn.deg_y() > 1:
        return None
    rows = pyn.y_coeffs()
    xpart = rows[0] if rows else UniPoly()
    ycoef = rows[1] if len(rows) > 1 else UniPoly()
    if not ycoef.is_constant():
        return None
    den = X.py.den.constant()
    return (pxp.poly(), ycoef.constant() / den,
            UniPoly([c / den for c in xpart.coeffs]))


def _classify_noncollinear(X, Y, W, abelian, alpha, beta) -> TwoDimResult:
    surface = X.surface
    sx = _borel_shape(X)
    sy = _borel_shape(Y)
    if sx is None or sy is None:
        raise Unclassified("pair is outside the Borel shape reachable by the "
                           "implemented moves")
    # base projections live in C_1[x]
    p1, p2 = sx[0], sy[0]
    rows = [[p1.coeff(0), p2.coeff(0)], [p1.coeff(1), p2.coeff(1)]]
    from .linsolve import rank
    base_dim = rank([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]])
    n = max(sx[2].degree(), sy[2].degree(), 0)
    if base_dim == 1:
        return _classify_g1(X, Y, surface, n)
    return _classify_g2(X, Y, surface, n)


def _classify_g1(X, Y, surface, n) -> TwoDimResult:
    from .normal_forms import normalize_in_borel
    # vertical member W0 and a transverse member V
    comb = _vertical_combination(X, Y)
    if comb is None:
        raise Unclassified("no vertical combination found")
    W0, V = comb
    res = normalize_in_borel(V, n)
    chain = res.conjugator
    Vn = pullback(V, chain).scale(res.scale.inverse())
    Wn = pullback(W0, chain)
    label = res.label
    mk_one = BiRat.one()
    if label.kind == "DxPlusEps":
        eps = label.eps
        cbar, pbar = _vertical_parts(Wn)
        if not cbar.is_zero():
            # closure forces eps = 0 and a constant pbar: shear onto <dx, y dy>
            if not pbar.is_zero():
                mp = _shear_map_rat(surface, UniRat.of(0) - pbar / cbar)
                chain = chain.compose(mp)
                Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
            out = TwoDimLabel("a01")
            return TwoDimResult(out, chain, (Vn, Wn), surface)
        if eps:
            n1 = label.n + 1
            shift = BiRat.x()**n1 * Scalar.of(Fraction(1, n1)) * Scalar.of(eps)
            mp = BirationalMap(surface, surface, BiRat.x(), BiRat.y() + shift,
                               inverse=(BiRat.x(), BiRat.y() - shift))
            chain = chain.compose(mp)
            Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
        out = TwoDimLabel("a00")
        return TwoDimResult(out, chain, (Vn, Wn), surface)
    if label.kind == "J":
        cbar, pbar = _vertical_parts(Wn)
        if not cbar.is_zero():
            out = TwoDimLabel("a01")
            return TwoDimResult(out, chain, (Vn, Wn), surface)
        out = TwoDimLabel("d")
        return TwoDimResult(out, chain, (Vn, Wn), surface)
    if label.kind == "Hgamma":
        g = label.gamma
        cbar, pbar = _vertical_parts(Wn)
        if not cbar.is_zero():
            # W = (cbar·y + k·x^g)·dy; f = (x, y·x^g) when k != 0
            k, j = _monomial_of(pbar)
            if k is not None and k.is_zero():
                out = TwoDimLabel("a11")
                return TwoDimResult(out, chain, (Vn, Wn), surface)
            if j is None or not _is_exponent(g, j):
                raise Unclassified("vertical partner is not a kernel monomial")
            mp = _ymul_map(surface, j)
            chain = chain.compose(mp)
            Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
            # now W = (cbar·y + k)·dy: constant shear
            k2 = Wn.py - BiRat.y() * cbar
            mp = _shear_map_rat(surface, UniRat.of(0) - (k2 / BiRat.of(cbar)).as_unirat_in_x())
            chain = chain.compose(mp)
            Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
            out = TwoDimLabel("a11")
            return TwoDimResult(out, chain, (Vn, Wn), surface)
        k, j = _monomial_of(pbar)
        if k is None:
            raise Unclassified("vertical partner is not a monomial")
        mp = _ymul_map(surface, j)
        chain = chain.compose(mp)
        Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
        newg = g - Scalar.of(j)
        if newg.is_zero():
            mp = _swap_map(surface)
            chain = chain.compose(mp)
            Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
            out = TwoDimLabel("a01")
            return TwoDimResult(out, chain, (Vn, Wn), surface)
        out = TwoDimLabel("cgamma", gamma=newg)
        return TwoDimResult(out, chain, (Vn, Wn), surface)
    if label.kind == "Rm":
        m = label.m
        cbar, pbar = _vertical_parts(Wn)
        if not cbar.is_zero():
            raise Unclassified("Rm with a y-part partner cannot close")
        k, j = _monomial_of(pbar)
        if k is None:
            raise Unclassified("vertical partner is not a monomial")
        lam = j - m
        if lam == 0:
            mp = _ymul_map(surface, m)
            chain = chain.compose(mp)
            Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
            mp = _swap_map(surface)
            chain = chain.compose(mp)
            Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
            out = TwoDimLabel("a01")
            return TwoDimResult(out, chain, (Vn, Wn), surface)
        if lam < 0:
            nf = -lam
            mp = _ymul_map(surface, m + lam)
        else:
            nf = lam
            mp = _fn_flip_map(surface, m + lam)
        chain = chain.compose(mp)
        Vn, Wn = pullback(Vn, mp), pullback(Wn, mp)
        out = TwoDimLabel("fn", n=nf)
        # rescale to put the x^nf coefficient at 1 if needed
        Vn, Wn, chain = _fn_rescale(Vn, Wn, chain, surface, nf)
        return TwoDimResult(out, chain, (Vn, Wn), surface)
    raise Unclassified(f"unhandled normal form {label} in the g1 branch")


def _fn_rescale(Vn, Wn, chain, surface, nf):
    """Rescale y so the transverse member is an exact multiple of the model
    generator x·dx + (n·y + x^n)·dy; the landed Vn has the shape
    s·x·dx + (s·n·y + e·x^n)·dy and y -> (e/s)·y fixes the x^n coefficient."""
    s = _xn_coefficient(Vn, 1, component="px")
    e = _xn_coefficient(Vn, nf, component="py")
    if s is None or e is None or s.is_zero() or e.is_zero():
        raise Unclassified("fn landing has an unexpected shape")
    c = e / s
    if c.is_one():
        return Vn, Wn, chain
    mp = _yscale(surface, c)
    chain = chain.compose(mp)
    return pullback(Vn, mp), pullback(Wn, mp), chain


def _xn_coefficient(V: VectorField, nf: int,
                    component: str = "py") -> Optional[Scalar]:
    p = V.py if component == "py" else V.px
    if not p.is_polynomial():
        return None
    return p.num.coeff((nf, 0)) / p.den.constant()


def _yscale(surface, mu: Scalar) -> BirationalMap:
    mu = Scalar.of(mu)
    return BirationalMap(surface, surface, BiRat.x(), BiRat.y() * mu,
                         inverse=(BiRat.x(), BiRat.y() / mu))


def _xscale(surface, lam: Scalar) -> BirationalMap:
    lam = Scalar.of(lam)
    return BirationalMap(surface, surface, BiRat.x() * lam, BiRat.y(),
                         inverse=(BiRat.x() / lam, BiRat.y()))


def _ymul_map(surface, j: int) -> BirationalMap:
    """(x, y) -> (x, y·x^j) with exact inverse."""
    xj = BiRat.x(j)
    return BirationalMap(surface, surface, BiRat.x(), BiRat.y() * xj,
                         inverse=(BiRat.x(), BiRat.y() / xj))


def _fn_flip_map(surface, k: int) -> BirationalMap:
    """(x, y) -> (1/x, -y·x^{-k}) used for the positive-lambda fn branch."""
    xinv = BiRat.x(-1)
    f2 = -BiRat.y() * BiRat.x(-k)
    return BirationalMap(surface, surface, xinv, f2,
                         inverse=(xinv, -BiRat.y() * BiRat.x(-k)))


def _monomial_of(p: UniRat) -> Tuple[Optional[Scalar], Optional[int]]:
    """(coefficient, exponent) when p is a monomial (0 gives (0, None))."""
    if not p.is_polynomial():
        return None, None
    poly = p.poly()
    if poly.is_zero():
        return S0, None
    nz = [k for k, c in enumerate(poly.coeffs) if not c.is_zero()]
    if len(nz) != 1:
        return None, None
    return poly.coeffs[nz[0]], nz[0]


def _is_exponent(g: Scalar, j: int) -> bool:
    return g.is_rational() and g.re.denominator == 1 and int(g.re) == j


def _vertical_parts(W: VectorField) -> Tuple[Scalar, UniRat]:
    """W = (c·y + p(x))·dy -> (c, p)."""
    if not W.is_vertical():
        raise Unclassified("expected a vertical field")
    py = W.py
    if py.den.deg_y() > 0 or py.num.deg_y() > 1:
        raise Unclassified("vertical partner is not affine in y")
    rows = py.num.y_coeffs()
    den = py.den.y_coeffs()[0] if not py.den.is_zero() else UniPoly.of(1)
    p = UniRat(rows[0] if rows else UniPoly(), den)
    cpart = UniRat(rows[1], den) if len(rows) > 1 else UniRat.of(0)
    if not cpart.is_constant():
        raise Unclassified("y-coefficient is not constant")
    if not p.is_polynomial():
        raise Unclassified("x-part is not polynomial")
    return cpart.constant() if cpart.is_constant() else S0, p


def _vertical_combination(X, Y) -> Optional[Tuple[VectorField, VectorField]]:
    """(vertical combo, transverse member) for a base projection of rank 1."""
    if X.is_vertical():
        return X, Y
    if Y.is_vertical():
        return Y, X
    # alpha·X + beta·Y vertical: match the dx components
    from .linsolve import coeff_match_solve
    try:
        _, hom = coeff_match_solve([X.px, Y.px], BiRat.zero())
    except NoSolution:
        return None
    for vec in hom:
        a, b = vec
        if a.is_zero() and b.is_zero():
            continue
        W = X.scale(a) + Y.scale(b)
        if W.is_zero():
            continue
        # any member with a nonzero coefficient in W stays independent of W
        V = Y if b.is_zero() else X
        return W, V
    return None


def _classify_g2(X, Y, surface, n) -> TwoDimResult:
    # arrange V1 with dx-part 1 and V2 with dx-part x via span operations
    sx, sy = _borel_shape(X), _borel_shape(Y)
    p1, p2 = sx[0], sy[0]
    # solve (u, v): u·p1 + v·p2 = 1 and = x
    rows = [[p1.coeff(0), p2.coeff(0)], [p1.coeff(1), p2.coeff(1)]]
    one_sol, _ = solve_linear(rows, [S1, S0])
    x_sol, _ = solve_linear(rows, [S0, S1])
    V1 = X.scale(one_sol[0]) + Y.scale(one_sol[1])
    V2 = X.scale(x_sol[0]) + Y.scale(x_sol[1])
    # shear away the x-part of V2 modulo its kernel monomial
    from .normal_forms import _phi_mu_gamma_solve
    s2 = _borel_shape(V2)
    cbar = s2[1]
    q, c, ker = _phi_mu_gamma_solve(1, cbar, UniPoly([-cc for cc in s2[2].coeffs]), n)
    mp = _shear_map_rat(surface, UniRat.of(q))
    chain = mp
    V1, V2 = pullback(V1, mp), pullback(V2, mp)
    s1, s2 = _borel_shape(V1), _borel_shape(V2)
    ebar = -c if c is not None else S0
    if ebar.is_zero():
        # V2 = x·dx + cbar·y·dy; closure forces V1 = dx + k·x^(cbar-1)·dy
        k, j = _monomial_of(UniRat.of(s1[2]))
        if not s1[1].is_zero():
            raise Unclassified("transverse pair has an unexpected y-part")
        if k is not None and not k.is_zero():
            if cbar.is_zero() or not _is_exponent(cbar, j + 1):
                raise Unclassified("dx-member carries a non-kernel monomial")
            # f = (x, y + k/cbar·x^cbar)
            shift = UniPoly([S0] * (j + 1) + [k / cbar])
            mp = _shear_map_rat(surface, UniRat.of(shift))
            chain = chain.compose(mp)
            V1, V2 = pullback(V1, mp), pullback(V2, mp)
        mp = _swap_map(surface)
        chain = chain.compose(mp)
        V1, V2 = pullback(V1, mp), pullback(V2, mp)
        if cbar.is_zero():
            out = TwoDimLabel("CollinearAffine")
            return TwoDimResult(out, chain, (V1, V2), surface)
        out = TwoDimLabel("cgamma", gamma=cbar.inverse())
        return TwoDimResult(out, chain, (V1, V2), surface)
    # ebar != 0: forces cbar = 0 and V1 = dx: model d after swap and rescale
    if not cbar.is_zero():
        raise Unclassified("resonant monomial with nonzero y-coefficient")
    mp = _swap_map(surface)
    chain = chain.compose(mp)
    V1, V2 = pullback(V1, mp), pullback(V2, mp)
    mp = _xscale(surface, ebar)
    chain = chain.compose(mp)
    V1, V2 = pullback(V1, mp), pullback(V2, mp)
    out = TwoDimLabel("d")
    return TwoDimResult(out, chain, (V1, V2), surface)
