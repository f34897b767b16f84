"""Normal forms of single fields: the sl3 picture of aut(P2), Borel
normalization on Hirzebruch surfaces and the monomial transport of H_gamma."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bipoly import BiPoly, BiRat
from .errors import (CharPolyDoesNotSplit, NotInAutP2, NotInBorel,
                     NothingToReduce, NotUnimodular)
from .fields import (BirationalMap, VectorField, autp2_basis, field_in_span,
                     pullback)
from .linsolve import solve_linear
from .scalars import (FieldContext, PLAIN_CONTEXT, Scalar, extend_by_sqrt,
                      sqrt_in_context)
from .surfaces import P2, SurfaceModel
from .unipoly import UniPoly, UniRat

S0 = Scalar.zero()
S1 = Scalar.one()

Matrix3 = List[List[Scalar]]


def mat3(rows) -> Matrix3:
    return [[Scalar.of(c) for c in row] for row in rows]


def mat3_trace(A: Matrix3) -> Scalar:
    return A[0][0] + A[1][1] + A[2][2]


def mat3_mul(A: Matrix3, B: Matrix3) -> Matrix3:
    return [[sum((A[i][k] * B[k][j] for k in range(3)), S0)
             for j in range(3)] for i in range(3)]


def mat3_sub(A: Matrix3, B: Matrix3) -> Matrix3:
    return [[A[i][j] - B[i][j] for j in range(3)] for i in range(3)]


def mat3_scale(A: Matrix3, c: Scalar) -> Matrix3:
    return [[A[i][j] * c for j in range(3)] for i in range(3)]


def mat3_identity() -> Matrix3:
    return [[S1 if i == j else S0 for j in range(3)] for i in range(3)]


def mat3_det(A: Matrix3) -> Scalar:
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def mat3_inverse(A: Matrix3) -> Matrix3:
    d = mat3_det(A)
    if d.is_zero():
        raise ValueError("singular matrix")
    cof = [[(A[(i + 1) % 3][(j + 1) % 3] * A[(i + 2) % 3][(j + 2) % 3]
             - A[(i + 1) % 3][(j + 2) % 3] * A[(i + 2) % 3][(j + 1) % 3])
            for j in range(3)] for i in range(3)]
    dinv = d.inverse()
    return [[cof[j][i] * dinv for j in range(3)] for i in range(3)]


def mat3_apply(A: Matrix3, v: Sequence[Scalar]) -> List[Scalar]:
    return [sum((A[i][k] * v[k] for k in range(3)), S0) for i in range(3)]


def mat3_rank(A: Matrix3) -> int:
    from .linsolve import rank
    return rank([list(row) for row in A])


def phi_iso(A: Matrix3, surface: SurfaceModel = P2) -> VectorField:
    """The degree-<=2 field (dx, dy, -x·dx - y·dy)·A·(x, y, 1)^t on P2."""
    if not mat3_trace(A).is_zero():
        raise ValueError("phi_iso needs a traceless matrix")
    x, y = BiRat.x(), BiRat.y()
    row1 = A[0][0] * x + A[0][1] * y + BiRat.of(A[0][2])
    row2 = A[1][0] * x + A[1][1] * y + BiRat.of(A[1][2])
    row3 = A[2][0] * x + A[2][1] * y + BiRat.of(A[2][2])
    return VectorField(surface, row1 - x * row3, row2 - y * row3)


def phi_inv(X: VectorField) -> Matrix3:
    """The unique traceless A with phi_iso(A) = X; NotInAutP2 otherwise."""
    if not X.surface.is_p2():
        raise NotInAutP2("phi_inv expects a P2-tagged field")
    ok, coeffs = field_in_span(autp2_basis(X.surface), X)
    if not ok:
        raise NotInAutP2("field is outside the aut(P2) span")
    c = coeffs  # order: dx, dy, x dx, y dy, y dx, x dy, x(x dx+y dy), y(x dx+y dy)
    # matrix entries from the basis decomposition (traceless gauge):
    #   A13=c0, A23=c1, A12=c4, A21=c5, A31=-c6, A32=-c7,
    #   diagonal from x dx and y dy: A11-A33=c2, A22-A33=c3, trace 0.
    a33 = -(c[2] + c[3]) / Scalar.of(3)
    a11 = c[2] + a33
    a22 = c[3] + a33
    return [[a11, c[4], c[0]],
            [c[5], a22, c[1]],
            [-c[6], -c[7], a33]]


def projective_map_of_matrix(C: Matrix3, surface_from: SurfaceModel = P2,
                             surface_to: SurfaceModel = P2) -> BirationalMap:
    """Affine-chart expression of [v] -> [C·v], with its exact inverse."""
    x, y = BiRat.x(), BiRat.y()
    rows = []
    for i in range(3):
        rows.append(C[i][0] * x + C[i][1] * y + BiRat.of(C[i][2]))
    Ci = mat3_inverse(C)
    rows_i = []
    for i in range(3):
        rows_i.append(Ci[i][0] * x + Ci[i][1] * y + BiRat.of(Ci[i][2]))
    return BirationalMap(surface_from, surface_to,
                         rows[0] / rows[2], rows[1] / rows[2],
                         inverse=(rows_i[0] / rows_i[2], rows_i[1] / rows_i[2]))


# -- characteristic polynomial and eigenstructure -------------------------------


def charpoly_coeffs(A: Matrix3) -> Tuple[Scalar, Scalar]:
    """(p, q) with char(λ) = λ³ + p·λ + q for traceless A."""
    # p = sum of principal 2x2 minors, q = -det
    p = (A[0][0] * A[1][1] - A[0][1] * A[1][0]
         + A[0][0] * A[2][2] - A[0][2] * A[2][0]
         + A[1][1] * A[2][2] - A[1][2] * A[2][1])
    q = -mat3_det(A)
    return p, q


def _gaussian_root_of_cubic(p: Scalar, q: Scalar) -> Optional[Scalar]:
    """A root in Q(i) of λ³ + pλ + q, or None."""
    if q.is_zero():
        return S0
    # candidate roots divide q after clearing denominators; enumerate via the
    # rational root theorem on the norm when coefficients are Gaussian
    dens = [p.re.denominator, p.im.denominator, q.re.denominator, q.im.denominator]
    from math import lcm
    m = lcm(*dens)
    # λ = u/m reduces to u³ + (p m²) u + q m³ = 0 with Gaussian-integer coeffs
    P = p * Scalar.of(m * m)
    Q = q * Scalar.of(m**3)
    for cand in _gaussian_divisors(Q):
        for unit in (Scalar.of(1), Scalar.of(-1), Scalar.i(), -Scalar.i()):
            r = cand * unit
            if (r**3 + P * r + Q).is_zero():
                return r / Scalar.of(m)
    return None


def _gaussian_divisors(z: Scalar):
    """Divisors (up to units) of a Gaussian integer with small norm."""
    from math import isqrt
    n = int(z.re * z.re + z.im * z.im)
    seen = set()
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            for nd in (d, n // d):
                for a in range(0, isqrt(nd) + 1):
                    b2 = nd - a * a
                    b = isqrt(b2)
                    if b * b == b2:
                        cand = (a, b)
                        if cand not in seen:
                            seen.add(cand)
                            out.append(Scalar(a, b))
        d += 1
    return out


def cubic_roots(p: Scalar, q: Scalar, ctx: FieldContext):
    """Roots of λ³ + pλ + q over the context field, extending once if needed.

    Returns (roots, new context); raises CharPolyDoesNotSplit when the cubic
    is irreducible over Q(i) (no quadratic extension can split it).
    """
    r0 = _gaussian_root_of_cubic(p, q)
    if r0 is None:
        raise CharPolyDoesNotSplit(
            f"cubic t^3 + ({p})t + ({q}) has no root in Q(i)",
            charpoly=(p, q))
    # factor: λ³+pλ+q = (λ - r0)(λ² + r0 λ + (p + r0²))
    b, c = r0, p + r0 * r0
    disc = b * b - Scalar.of(4) * c
    root = sqrt_in_context(disc, ctx)
    if root is None:
        ctx, already = extend_by_sqrt(disc, ctx)
        root = ctx.sqrt_gen() if not already else sqrt_in_context(disc, ctx)
    r1 = (-b + root) / 2
    r2 = (-b - root) / 2
    return [r0, r1, r2], ctx


def _null_vector(A: Matrix3) -> List[Scalar]:
    """A nonzero kernel vector of a singular matrix."""
    sol, basis = solve_linear([list(r) for r in A], [S0, S0, S0])
    if not basis:
        raise ValueError("matrix is nonsingular")
    return basis[0]


def _solve_affine(A: Matrix3, rhs: List[Scalar]) -> List[Scalar]:
    sol, _ = solve_linear([list(r) for r in A], rhs)
    return sol


# -- classification data --------------------------------------------------------


@dataclass
class NormalFormLabel:
    kind: str                          # T | N | J | Hgamma | L | Rm | VerticalPoly | DxPlusEps
    gamma: Optional[Scalar] = None
    m: Optional[int] = None
    p: Optional[UniRat] = None
    n: Optional[int] = None
    eps: Optional[int] = None

    def __repr__(self):
        if self.kind == "Hgamma":
            return f"Hgamma({self.gamma})"
        if self.kind == "Rm":
            return f"Rm({self.m})"
        if self.kind == "VerticalPoly":
            return f"VerticalPoly({self.p})"
        if self.kind == "DxPlusEps":
            return f"DxPlusEps(n={self.n}, eps={self.eps})"
        return self.kind


def normal_form_field(label: NormalFormLabel, surface: SurfaceModel) -> VectorField:
    x, y = BiRat.x(), BiRat.y()
    one, zero = BiRat.one(), BiRat.zero()
    if label.kind == "T":
        return VectorField(surface, zero, one)
    if label.kind == "N":
        return VectorField(surface, one, x)
    if label.kind == "J":
        return VectorField(surface, one, y)
    if label.kind == "L":
        return VectorField(surface, zero, y)
    if label.kind == "Hgamma":
        return VectorField(surface, x, y * label.gamma)
    if label.kind == "Rm":
        return VectorField(surface, x, y * Scalar.of(label.m) + x**label.m)
    if label.kind == "VerticalPoly":
        return VectorField(surface, zero, BiRat.of(label.p))
    if label.kind == "DxPlusEps":
        return VectorField(surface, one, x**label.n * Scalar.of(label.eps))
    raise ValueError(f"unknown label {label}")


@dataclass
class ClassificationResult:
    label: NormalFormLabel
    scale: Scalar
    conjugator: Optional[BirationalMap]
    matrix_witness: Optional[Matrix3] = None
    residual_reduction: Optional[BirationalMap] = None
    context: FieldContext = PLAIN_CONTEXT
    surface: SurfaceModel = P2

    def normal_field(self) -> VectorField:
        return normal_form_field(self.label, self.surface)


def classify_p2(X: VectorField, ctx: FieldContext = PLAIN_CONTEXT) -> ClassificationResult:
    """Jordan classification of a field in aut(P2): T, N, J or H_gamma.

    The conjugator C realizes pull-back by the induced projective map; the
    correspondence used is pullback(phi_iso(A), map of C) = phi_iso(C^{-1}AC).
    """
    A = phi_inv(X)
    if all(c.is_zero() for row in A for c in row):
        raise ValueError("the zero field is not classified")
    p, q = charpoly_coeffs(A)
    if p.is_zero() and q.is_zero():
        # nilpotent: T when A² = 0, N otherwise
        A2 = mat3_mul(A, A)
        if all(c.is_zero() for row in A2 for c in row):
            return _classify_nilpotent_T(X, A, ctx)
        return _classify_nilpotent_N(X, A, ctx)
    roots, ctx = cubic_roots(p, q, ctx)
    distinct = []
    for r in roots:
        if all(r != d for d in distinct):
            distinct.append(r)
    if len(distinct) < 3:
        dbl = next(r for r in distinct if roots.count(r) >= 2)
        other = -dbl * 2
        # diagonalizable iff rank(A - dbl·I) = 1
        shifted = mat3_sub(A, mat3_scale(mat3_identity(), dbl))
        if mat3_rank(shifted) == 1:
            return _classify_diagonalizable(X, A, [dbl, dbl, other], ctx)
        return _classify_jordan_J(X, A, dbl, other, ctx)
    return _classify_diagonalizable(X, A, roots, ctx)


def _gamma_candidates(eigs: List[Scalar]):
    """All (gamma, scale) with diag matching s·((2-g)/3, (2g-1)/3, -(g+1)/3)."""
    from itertools import permutations
    out = []
    for e1, e2, e3 in set(permutations(eigs)):
        s = e1 * 2 + e2
        if s.is_zero():
            continue
        g = (e1 + e2 * 2) / s
        trip = (s * (Scalar.of(2) - g) / 3, s * (g * 2 - S1) / 3, -s * (g + S1) / 3)
        if (trip[0], trip[1], trip[2]) == (e1, e2, e3):
            out.append((g, s, (e1, e2, e3)))
    return out


def _eigvec(A: Matrix3, lam: Scalar) -> List[Scalar]:
    return _null_vector(mat3_sub(A, mat3_scale(mat3_identity(), lam)))


def _columns_matrix(cols: List[List[Scalar]]) -> Matrix3:
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _normalize_det_by_column(C: Matrix3, col: int) -> Matrix3:
    d = mat3_det(C)
    out = [list(row) for row in C]
    inv = d.inverse()
    for i in range(3):
        out[i][col] = out[i][col] * inv
    return out


def _classify_diagonalizable(X, A, eigs, ctx):
    cands = _gamma_candidates(eigs)
    if not cands:
        raise CharPolyDoesNotSplit("eigenvalues admit no H_gamma matching")
    g, s, order = max(cands, key=lambda t: t[0].sort_key())
    cols = [_eigvec_indexed(A, lk) for lk in _dedupe_ordered(A, order)]
    C = _columns_matrix(cols)
    C = _normalize_det_by_column(C, 0)
    return ClassificationResult(
        label=NormalFormLabel("Hgamma", gamma=g), scale=s,
        conjugator=projective_map_of_matrix(C), matrix_witness=C, context=ctx)


def _dedupe_ordered(A, order):
    """Eigenvalues in the chosen order; repeated ones need independent vectors."""
    seen = {}
    out = []
    for lam in order:
        k = seen.get(lam, 0)
        seen[lam] = k + 1
        out.append((lam, k))
    return out


def _eigvec_indexed(A, lam_k):
    lam, k = lam_k
    shifted = mat3_sub(A, mat3_scale(mat3_identity(), lam))
    _, basis = solve_linear([list(r) for r in shifted], [S0, S0, S0])
    if k >= len(basis):
        raise ValueError("eigenspace smaller than multiplicity")
    return basis[k]


def _classify_nilpotent_T(X, A, ctx):
    # A² = 0, rank 1: kernel is 2-dimensional; columns (c1, c2, c3) with
    # A·c3 = c2, c1 completing the kernel; target s·E23.
    _, kernel = solve_linear([list(r) for r in A], [S0, S0, S0])
    w = _vector_outside(kernel)
    c2 = mat3_apply(A, w)
    c3 = w
    c1 = _complete_kernel(kernel, c2)
    C = _columns_matrix([c1, c2, c3])
    C = _normalize_det_by_column(C, 0)
    return ClassificationResult(
        label=NormalFormLabel("T"), scale=S1,
        conjugator=projective_map_of_matrix(C), matrix_witness=C, context=ctx)


def _classify_nilpotent_N(X, A, ctx):
    # A² != 0, A³ = 0.  N = dx + x·dy comes from the matrix
    # [[0,0,1],[1,0,0],[0,0,0]], whose columns demand A·c1 = c2, A·c2 = 0,
    # A·c3 = c1: take (c1, c2, c3) = (A·w, A²·w, w).
    A2 = mat3_mul(A, A)
    w = None
    for cand in ([S1, S0, S0], [S0, S1, S0], [S0, S0, S1], [S1, S1, S0], [S1, S0, S1]):
        if not all(c.is_zero() for c in mat3_apply(A2, cand)):
            w = cand
            break
    c1 = mat3_apply(A, w)
    c2 = mat3_apply(A, c1)
    C = _columns_matrix([c1, c2, w])
    # chain scaling cannot reach det 1 without cube roots; keep C projective
    return ClassificationResult(
        label=NormalFormLabel("N"), scale=S1,
        conjugator=projective_map_of_matrix(C), matrix_witness=C, context=ctx)


def _classify_jordan_J(X, A, dbl, other, ctx):
    # double eigenvalue dbl with a 2-block; target s·(J-matrix) where the
    # J-matrix [[-1/3,0,1],[0,2/3,0],[0,0,-1/3]] couples columns 1 and 3.
    s = dbl * (-3)
    shifted = mat3_sub(A, mat3_scale(mat3_identity(), dbl))
    # v1 eigenvector, v2 with (A - dbl)v2 = v1 (choose from the image),
    # w eigenvector for the simple eigenvalue.
    sq = mat3_mul(shifted, shifted)
    _, gen_basis = solve_linear([list(r) for r in sq], [S0, S0, S0])
    v2 = None
    for cand in gen_basis:
        img = mat3_apply(shifted, cand)
        if not all(c.is_zero() for c in img):
            v2 = cand
            v1 = img
            break
    if v2 is None:
        raise ValueError("jordan chain construction failed")
    w = _eigvec(A, other)
    C = _columns_matrix([v1, w, [c * s for c in v2]])
    C = _normalize_det_by_column(C, 1)  # w has a free scale
    return ClassificationResult(
        label=NormalFormLabel("J"), scale=s,
        conjugator=projective_map_of_matrix(C), matrix_witness=C, context=ctx)


def _vector_outside(kernel: List[List[Scalar]]) -> List[Scalar]:
    from .linsolve import rank
    for cand in ([S1, S0, S0], [S0, S1, S0], [S0, S0, S1]):
        if rank(_rows_t(kernel + [cand])) > len(kernel):
            return cand
    raise ValueError("kernel spans everything")


def _complete_kernel(kernel: List[List[Scalar]], c2: List[Scalar]) -> List[Scalar]:
    from .linsolve import rank
    for cand in kernel:
        if rank(_rows_t([cand, c2])) == 2:
            return cand
    raise ValueError("cannot complete the kernel basis")


def _rows_t(vecs: List[List[Scalar]]):
    return [list(v) for v in vecs]


# -- Borel normalization (Hirzebruch surfaces) ----------------------------------


def _borel_decompose(X: VectorField, n: int):
    """(alpha, beta, gamma, p) with X = (alpha·x+beta)dx + (gamma·y + p(x))dy."""
    from .fields import borel_basis, field_in_span
    basis = borel_basis(n, X.surface)
    ok, coeffs = field_in_span(basis, X)
    if not ok:
        raise NotInBorel(f"field is outside B_{n}")
    beta, alpha = coeffs[0], coeffs[1]
    pcoeffs = coeffs[2:2 + n + 1]
    gamma = coeffs[-1]
    return alpha, beta, gamma, UniPoly(pcoeffs)


def _shear_map(surface, q: UniPoly) -> BirationalMap:
    qb = BiRat.of(BiPoly.of(q))
    return BirationalMap(surface, surface, BiRat.x(), BiRat.y() + qb,
                         inverse=(BiRat.x(), BiRat.y() - qb))


def _xtranslate_map(surface, a: Scalar) -> BirationalMap:
    return BirationalMap(surface, surface, BiRat.x() + BiRat.of(a), BiRat.y(),
                         inverse=(BiRat.x() - BiRat.of(a), BiRat.y()))


def _yscale_map(surface, mu: Scalar) -> BirationalMap:
    mu = Scalar.of(mu)
    return BirationalMap(surface, surface, BiRat.x(), BiRat.y() * mu,
                         inverse=(BiRat.x(), BiRat.y() / mu))


def _xscale_map(surface, lam: Scalar) -> BirationalMap:
    lam = Scalar.of(lam)
    return BirationalMap(surface, surface, BiRat.x() * lam, BiRat.y(),
                         inverse=(BiRat.x() / lam, BiRat.y()))


def _phi_mu_gamma_solve(mu: int, gamma: Scalar, target: UniPoly, n: int):
    """Solve gamma·q - x^mu·q' = target (+ c·x^kernel_exp when resonant).

    Returns (q, c, kernel_exp); c is None when the operator is bijective.
    """
    # operator on monomials x^k: mu=0 -> gamma·x^k - k·x^{k-1};
    #                            mu=1 -> (gamma - k)·x^k
    rows = []
    rhs = []
    ker_exp = None
    if mu == 1:
        if gamma.is_rational() and gamma.re.denominator == 1 and 0 <= gamma.re <= n:
            ker_exp = int(gamma.re)
    else:
        if gamma.is_zero():
            ker_exp = n
    ncols = n + 1 + (1 if ker_exp is not None else 0)
    for k in range(n + 1):
        row = [S0] * ncols
        for j in range(n + 1):
            # contribution of q_j x^j to the x^k coefficient
            if k == j:
                row[j] = row[j] + (gamma if mu == 0 else gamma - Scalar.of(j))
            if mu == 0 and j == k + 1:
                row[j] = row[j] - Scalar.of(j)
        if ker_exp is not None and k == ker_exp:
            row[n + 1] = S1
        rows.append(row)
        rhs.append(target.coeff(k))
    sol, _ = solve_linear(rows, rhs)
    q = UniPoly(sol[:n + 1])
    c = sol[n + 1] if ker_exp is not None else None
    return q, c, ker_exp


def normalize_in_borel(X: VectorField, n: int,
                       ctx: FieldContext = PLAIN_CONTEXT) -> ClassificationResult:
    """Move X inside B_n onto a catalog representative by an automorphism.

    The automorphism is a composition of an x-translation, a shear
    y -> y + q(x) and coordinate rescalings; it preserves B_n and the result
    is scale·(one of DxPlusEps, J, Hgamma, Rm, L, VerticalPoly).
    """
    surface = X.surface
    alpha, beta, gamma, p = _borel_decompose(X, n)
    chain: List[BirationalMap] = []

    def push(mp: BirationalMap):
        chain.append(mp)

    cur = X
    scale = S1
    if not alpha.is_zero():
        # translate x so the dx-part becomes alpha·x, then rescale the field
        a = -beta / alpha
        mp = _xtranslate_map(surface, a)
        cur = pullback(cur, mp)
        push(mp)
        scale = alpha
        cur = cur.scale(alpha.inverse())
        _, _, gamma, p = _borel_decompose(cur, n)
        gamma_n = gamma
        q, c, ker = _phi_mu_gamma_solve(1, gamma_n, -p, n)
        mp = _shear_map(surface, q)
        cur = pullback(cur, mp)
        push(mp)
        if c is None or c.is_zero():
            label = NormalFormLabel("Hgamma", gamma=gamma_n)
        else:
            # residual term is -c·x^m; a y-rescale by -c makes it exactly x^m
            mp = _yscale_map(surface, -c)
            cur = pullback(cur, mp)
            push(mp)
            label = NormalFormLabel("Rm", m=ker)
        conj = _compose_chain(chain, surface)
        return ClassificationResult(label=label, scale=scale, conjugator=conj,
                                    context=ctx, surface=surface)
    if not beta.is_zero():
        scale = beta
        cur = cur.scale(beta.inverse())
        _, _, gamma, p = _borel_decompose(cur, n)
        if not gamma.is_zero():
            q, c, ker = _phi_mu_gamma_solve(0, gamma, -p, n)
            mp = _shear_map(surface, q)
            cur = pullback(cur, mp)
            push(mp)
            # rescale x to bring dx + gamma·y·dy onto J = dx + y·dy
            lam = gamma.inverse()
            mp = _xscale_map(surface, lam)
            cur = pullback(cur, mp).scale(gamma)
            scale = scale * gamma
            push(mp)
            label = NormalFormLabel("J")
        else:
            q, c, ker = _phi_mu_gamma_solve(0, S0, -p, n)
            mp = _shear_map(surface, q)
            cur = pullback(cur, mp)
            push(mp)
            if c is None or c.is_zero():
                label = NormalFormLabel("DxPlusEps", n=n, eps=0)
            else:
                mp = _yscale_map(surface, -c)
                cur = pullback(cur, mp)
                push(mp)
                label = NormalFormLabel("DxPlusEps", n=n, eps=1)
        conj = _compose_chain(chain, surface)
        return ClassificationResult(label=label, scale=scale, conjugator=conj,
                                    context=ctx, surface=surface)
    # vertical members of the Borel algebra
    if not gamma.is_zero():
        scale = gamma
        cur = cur.scale(gamma.inverse())
        q = UniPoly([-(c / gamma) for c in p.coeffs])
        mp = _shear_map(surface, q)
        cur = pullback(cur, mp)
        push(mp)
        label = NormalFormLabel("L")
        conj = _compose_chain(chain, surface)
        return ClassificationResult(label=label, scale=scale, conjugator=conj,
                                    context=ctx, surface=surface)
    if p.is_zero():
        raise ValueError("the zero field is not classified")
    label = NormalFormLabel("VerticalPoly", p=UniRat.of(p))
    return ClassificationResult(label=label, scale=S1,
                                conjugator=BirationalMap.identity(surface),
                                context=ctx, surface=surface)


def _compose_chain(chain: List[BirationalMap], surface) -> BirationalMap:
    """Compose witness maps so pullback by the result equals pulling back
    through the chain in order."""
    if not chain:
        return BirationalMap.identity(surface)
    out = chain[0]
    for mp in chain[1:]:
        out = out.compose(mp)
    return out


def reduce_to_TLJH(result: ClassificationResult) -> ClassificationResult:
    """Second-stage birational reductions: DxPlusEps and VerticalPoly to T,
    Rm to J (Hgamma and L and the terminal labels raise NothingToReduce)."""
    label = result.label
    surface = result.surface
    x, y = BiRat.x(), BiRat.y()
    if label.kind == "DxPlusEps":
        n1 = label.n + 1
        shift = x**n1 * Scalar.of(Fraction(label.eps, n1))
        first = BirationalMap(surface, surface, x, y + shift,
                              inverse=(x, y - shift))
        swap = BirationalMap(surface, surface, y, x, inverse=(y, x))
        red = first.compose(swap)
        new_label = NormalFormLabel("T")
    elif label.kind == "VerticalPoly":
        pb = BiRat.of(label.p)
        red = BirationalMap(surface, surface, x, y * pb,
                            inverse=(x, y / pb))
        new_label = NormalFormLabel("T")
    elif label.kind == "Rm":
        # inverse of (x,y) -> (y, y^m·x) is (u,v) -> (v/u^m, u)
        m = label.m
        red = BirationalMap(surface, surface, y, (y**m) * x,
                            inverse=(y / (x**m), x))
        new_label = NormalFormLabel("J")
    else:
        raise NothingToReduce(f"label {label} is terminal")
    return ClassificationResult(
        label=new_label, scale=result.scale, conjugator=result.conjugator,
        residual_reduction=red, context=result.context, surface=surface)


def hgamma_relate(gamma: Scalar, M: Sequence[Sequence[int]],
                  surface: SurfaceModel = None):
    """Transport H_gamma by the monomial map of a unimodular integer matrix.

    Returns (gamma', map, verified) with gamma' = (a·gamma+b)/(c·gamma+d) and
    map (x,y) -> (x^a·y^{-c}, x^{-b}·y^d); verified confirms the pullback of
    H_gamma is an exact scalar multiple of H_gamma'.
    """
    from .surfaces import F0
    if surface is None:
        surface = F0
    (a, b), (c, d) = M
    det = a * d - b * c
    if det not in (1, -1):
        raise NotUnimodular(f"determinant {det} is not ±1")
    gamma = Scalar.of(gamma)
    den = gamma * c + Scalar.of(d)
    if den.is_zero():
        raise ValueError("c·gamma + d = 0")
    gamma2 = (gamma * a + Scalar.of(b)) / den
    f1 = BiRat.x(a) * BiRat.y(-c)
    f2 = BiRat.x(-b) * BiRat.y(d)
    # inverse exponents: the matrix [[a,-c],[-b,d]] inverts to det^{-1}·[[d,c],[b,a]]
    s = det
    g1 = BiRat.x(d * s) * BiRat.y(c * s)
    g2 = BiRat.x(b * s) * BiRat.y(a * s)
    mp = BirationalMap(surface, surface, f1, f2, inverse=(g1, g2))
    Hg = VectorField(surface, BiRat.x(), BiRat.y() * gamma)
    Hg2 = VectorField(surface, BiRat.x(), BiRat.y() * gamma2)
    pulled = pullback(Hg, mp)
    verified = False
    mult = den * Scalar.of(det)
    if pulled == Hg2.scale(mult):
        verified = True
    else:
        for cand in (den, -den, mult, -mult):
            if pulled == Hg2.scale(cand):
                verified = True
                break
    return gamma2, mp, verified
