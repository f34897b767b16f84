"""Integrability of fibration-tangent fields: the discriminant criterion,
regularizing conjugations and symbolic one-parameter flows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .bipoly import BiRat
from .errors import (CannotAdapt, ConstantIntegral, NotAFirstIntegral,
                     NotIntegrable, NotQuadratic, NotVertical)
from .fields import BirationalMap, VectorField, first_integral_check, _mobius_split
from .scalars import FieldContext, PLAIN_CONTEXT, Scalar, extend_by_sqrt, sqrt_in_context
from .surfaces import SurfaceModel
from .symflow import FlowExpr, SymExpr, mat_identity
from .unipoly import UniPoly, UniRat

S0 = Scalar.zero()
S1 = Scalar.one()


@dataclass(frozen=True)
class VerticalQuadratic:
    """X = (a(x)·y² + 2·b(x)·y + c(x)) d/dy."""

    a: UniRat
    b: UniRat
    c: UniRat

    def discriminant(self) -> UniRat:
        return self.b * self.b - self.a * self.c

    def field(self, surface: SurfaceModel) -> VectorField:
        h = (BiRat.of(self.a) * BiRat.y(2)
             + BiRat.of(self.b) * BiRat.y() * Scalar.of(2)
             + BiRat.of(self.c))
        return VectorField.vertical(surface, h)

    def matrix(self) -> List[List[UniRat]]:
        return [[self.b, self.c], [-self.a, -self.b]]


def extract_quadratic(X: VectorField) -> VerticalQuadratic:
    """Read off (a, b, c) with py = a·y² + 2b·y + c; exactness is the point.

    Raises NotVertical when the d/dx component is nonzero and NotQuadratic
    when py is not a polynomial of degree <= 2 in y over k(x).
    """
    if not X.is_vertical():
        raise NotVertical("extraction needs a vertical field")
    h = X.py
    if h.den.deg_y() > 0:
        raise NotQuadratic("component is not polynomial in y over k(x)")
    if h.num.deg_y() > 2:
        raise NotQuadratic(f"y-degree {h.num.deg_y()} exceeds 2")
    den = h.den.y_coeffs()[0] if not h.den.is_zero() else UniPoly.of(1)
    rows = h.num.y_coeffs()
    get = lambda j: UniRat(rows[j], den) if j < len(rows) else UniRat.of(0)
    half = Scalar.of(Fraction(1, 2))
    return VerticalQuadratic(a=get(2), b=get(1) * half, c=get(0))


@dataclass
class IntegrabilityReport:
    verdict: str                       # "Integrable" | "NotIntegrable"
    reason: Optional[str] = None
    delta: Optional[UniRat] = None
    kappa: Optional[Scalar] = None
    Q: Optional[List[List[UniRat]]] = None
    Q_det: Optional[UniRat] = None
    normal_form: Optional[Tuple[str, VectorField]] = None
    conjugating_map: Optional[BirationalMap] = None
    context: FieldContext = PLAIN_CONTEXT
    quadratic: Optional[VerticalQuadratic] = None

    @property
    def integrable(self) -> bool:
        return self.verdict == "Integrable"


def _canonical_sqrt(k: Scalar) -> Scalar:
    """Pick the square root with nonnegative real part, ties by imag part."""
    key = (k.re, k.im, k.sre, k.sim)
    neg = (-k.re, -k.im, -k.sre, -k.sim)
    return k if key >= neg else -k


def mobius_vertical_map(surface: SurfaceModel, Q: List[List[UniRat]]) -> BirationalMap:
    """(x, y) -> (x, (Q11·y + Q12)/(Q21·y + Q22)), with its exact inverse."""
    q11, q12 = BiRat.of(Q[0][0]), BiRat.of(Q[0][1])
    q21, q22 = BiRat.of(Q[1][0]), BiRat.of(Q[1][1])
    y = BiRat.y()
    fwd = (q11 * y + q12) / (q21 * y + q22)
    inv = (q22 * y - q12) / (-q21 * y + q11)
    return BirationalMap(surface, surface, BiRat.x(), fwd,
                         inverse=(BiRat.x(), inv), vertical_matrix=Q)


def _conjugate_by_matrix(quad: VerticalQuadratic, Q: List[List[UniRat]]) -> VerticalQuadratic:
    """Matrix conjugation Q^{-1}·M·Q / det scaled; used for internal checks."""
    b, c, a = quad.b, quad.c, quad.a
    q11, q12, q21, q22 = Q[0][0], Q[0][1], Q[1][0], Q[1][1]
    det = q11 * q22 - q12 * q21
    # Mobius substitution y -> (q11 y + q12)/(q21 y + q22) on (a y² + 2b y + c)∂y
    a2 = a * q11 * q11 + (b * 2) * q11 * q21 + c * q21 * q21
    a1 = a * 2 * q11 * q12 + (b * 2) * (q11 * q22 + q12 * q21) + c * 2 * q21 * q22
    a0 = a * q12 * q12 + (b * 2) * q12 * q22 + c * q22 * q22
    return VerticalQuadratic(a=a2 / det, b=a1 / (det * 2), c=a0 / det)


def mobius_substitute_vertical(quad: VerticalQuadratic,
                               Q: List[List[UniRat]]) -> VerticalQuadratic:
    """Transport of a vertical quadratic under y -> Mobius(Q)(y).

    This is the honest substitution h(x, m(y))/m'(y) carried out on the level
    of y-coefficients (m' = det/(q21·y+q22)² cancels one square).
    """
    return _conjugate_by_matrix(quad, Q)


def integrability_test(X: VectorField,
                       ctx: FieldContext = PLAIN_CONTEXT) -> IntegrabilityReport:
    """Decide birational integrability of a vertical field.

    Integrable iff py = a(x)y² + 2b(x)y + c(x) with constant discriminant
    b² - ac; the report then carries kappa, the diagonalizing matrix Q and the
    conjugation onto 2·kappa·y·d/dy (kappa != 0) or d/dy (kappa = 0).
    """
    if not X.is_vertical():
        raise NotVertical("integrability test needs a vertical field")
    if X.is_zero():
        raise ValueError("the zero field has no normal form")
    try:
        quad = extract_quadratic(X)
    except NotQuadratic as e:
        return IntegrabilityReport(verdict="NotIntegrable",
                                   reason=f"NotQuadratic: {e}", context=ctx)
    delta = quad.discriminant()
    if not delta.is_constant():
        return IntegrabilityReport(verdict="NotIntegrable",
                                   reason="discriminant is not constant",
                                   delta=delta, quadratic=quad, context=ctx)
    dconst = delta.constant()
    if dconst.is_zero():
        kappa = S0
    else:
        kappa = sqrt_in_context(dconst, ctx)
        if kappa is None:
            ctx, already = extend_by_sqrt(dconst, ctx)
            kappa = ctx.sqrt_gen() if not already else sqrt_in_context(dconst, ctx)
        kappa = _canonical_sqrt(kappa)
    surface = X.surface
    if kappa.is_zero():
        Q, qdet = _nilpotent_frame(quad)
        nf_field = VectorField.vertical(surface, BiRat.one())
        label = "T"
    else:
        Q, qdet = _diagonal_frame(quad, kappa)
        nf_field = VectorField.vertical(surface, BiRat.y() * (kappa * 2))
        label = "L"
    conj = mobius_vertical_map(surface, Q)
    return IntegrabilityReport(
        verdict="Integrable", delta=delta, kappa=kappa, Q=Q, Q_det=qdet,
        normal_form=(label, nf_field), conjugating_map=conj,
        context=ctx, quadratic=quad,
    )


def _diagonal_frame(quad: VerticalQuadratic, kappa: Scalar):
    """Q with M = Q·diag(kappa,-kappa)·Q^{-1}, det Q = 1."""
    a, b, c = quad.a, quad.b, quad.c
    kb = UniRat.of(UniPoly([kappa]))
    if a.is_zero() and c.is_zero():
        one, zero = UniRat.of(1), UniRat.of(0)
        return [[one, zero], [zero, one]], UniRat.of(1)
    plus_candidates = [(c, kb - b), (kb + b, -a)]
    minus_candidates = [(c, -kb - b), (kb - b, a)]
    u_plus = next(u for u in plus_candidates if not (u[0].is_zero() and u[1].is_zero()))
    for u_minus in minus_candidates:
        det = u_plus[0] * u_minus[1] - u_plus[1] * u_minus[0]
        if not det.is_zero():
            break
    else:
        raise RuntimeError("no nondegenerate eigenvector pair")
    inv = det.inverse()
    Q = [[u_plus[0], u_minus[0] * inv], [u_plus[1], u_minus[1] * inv]]
    return Q, UniRat.of(1)


def _nilpotent_frame(quad: VerticalQuadratic):
    """Q with M = Q·N·Q^{-1} for the nilpotent Jordan block N.

    det Q = a (or c when a = 0) up to squares; over k(x) a unit determinant is
    generally unreachable without square roots of functions, so the exact
    determinant is reported alongside.
    """
    a, b, c = quad.a, quad.b, quad.c
    zero, one = UniRat.of(0), UniRat.of(1)
    for w in ((zero, one), (one, zero), (one, one)):
        mw = (b * w[0] + c * w[1], -a * w[0] - b * w[1])
        if not (mw[0].is_zero() and mw[1].is_zero()):
            det = mw[0] * w[1] - mw[1] * w[0]
            Q = [[mw[0], w[0]], [mw[1], w[1]]]
            return Q, det
    raise ValueError("zero matrix has no nilpotent frame")


def vertical_flow(X: VectorField, ctx: FieldContext = PLAIN_CONTEXT) -> FlowExpr:
    """Symbolic flow of an integrable vertical field: Q·exp(tD)·Q^{-1} as a
    Mobius transformation in y with entries in k(x)[t, E]."""
    report = integrability_test(X, ctx)
    if not report.integrable:
        raise NotIntegrable(report.reason or "field is not integrable")
    return flow_from_report(report)


def flow_from_report(report: IntegrabilityReport) -> FlowExpr:
    Q = report.Q
    kappa = report.kappa
    q11, q12 = SymExpr.of(Q[0][0]), SymExpr.of(Q[0][1])
    q21, q22 = SymExpr.of(Q[1][0]), SymExpr.of(Q[1][1])
    det = report.Q_det if report.Q_det is not None else UniRat.of(1)
    dinv = SymExpr.of(det.inverse())
    if kappa.is_zero():
        # Q·[[1,t],[0,1]]·Q^{-1}
        t = SymExpr.t()
        mid = [[SymExpr.of(1), t], [SymExpr.of(0), SymExpr.of(1)]]
        kpar = S0
    else:
        # Q·diag(E,1)·Q^{-1} with E-parameter 2*kappa
        E = SymExpr.E(1)
        mid = [[E, SymExpr.of(0)], [SymExpr.of(0), SymExpr.of(1)]]
        kpar = kappa * 2
    qm = [[q11, q12], [q21, q22]]
    qinv = [[q22 * dinv, SymExpr.of(0) - q12 * dinv],
            [SymExpr.of(0) - q21 * dinv, q11 * dinv]]
    from .symflow import mat_mul
    ym = mat_mul(mat_mul(qm, mid), qinv)
    return FlowExpr(mat_identity(), ym, kpar)


def product_flow(X: VectorField, ctx: FieldContext = PLAIN_CONTEXT) -> FlowExpr:
    """Flow of u(x)·d/dx + v(y)·d/dy with both parts quadratic.

    Handles the holomorphic normal forms T, L, J, H_gamma and every vertical
    integrable field; both Mobius factors share one exponential symbol.
    """
    if X.is_vertical():
        return vertical_flow(X, ctx)
    if X.px.depends_on_y() or X.py.depends_on_x():
        raise NotIntegrable("flow construction needs a split u(x)dx + v(y)dy shape")
    ux = X.px.as_unirat_in_x()
    vy = VectorField.vertical(X.surface, X.py.subst(BiRat.y(), BiRat.y()))
    # v(y)∂y read as a quadratic in its own variable: swap names
    swapped = BiRat(X.py.num.swap_vars(), X.py.den.swap_vars())
    xquad = _quad_of_unirat(ux)
    yquad = _quad_of_unirat(swapped.as_unirat_in_x())
    builders = []
    kappas = []
    for quad in (xquad, yquad):
        delta = quad.discriminant()
        if not delta.is_constant():
            raise NotIntegrable("factor has non-constant discriminant")
        k = sqrt_in_context(delta.constant(), ctx)
        if k is None:
            ctx, already = extend_by_sqrt(delta.constant(), ctx)
            k = ctx.sqrt_gen()
        kappas.append(_canonical_sqrt(k))
        builders.append(quad)
    k1, k2 = (k * 2 for k in kappas)
    # one shared symbol E with parameter kpar; matrices use powers E^(ki/kpar)
    nonzero = [k for k in (k1, k2) if not k.is_zero()]
    if not nonzero:
        kpar = S0
    else:
        kpar = nonzero[0]
    mats = []
    for quad, ki in zip(builders, (k1, k2)):
        kappa_i = ki / Scalar.of(2) if not ki.is_zero() else S0
        if ki.is_zero():
            Q, qdet = _nilpotent_frame(quad)
            mid = [[SymExpr.of(1), SymExpr.t()], [SymExpr.of(0), SymExpr.of(1)]]
        else:
            Q, qdet = _diagonal_frame(quad, kappa_i)
            mid = [[SymExpr.E(ki / kpar), SymExpr.of(0)],
                   [SymExpr.of(0), SymExpr.of(1)]]
        q11, q12 = SymExpr.of(Q[0][0]), SymExpr.of(Q[0][1])
        q21, q22 = SymExpr.of(Q[1][0]), SymExpr.of(Q[1][1])
        dinv = SymExpr.of(qdet.inverse())
        qm = [[q11, q12], [q21, q22]]
        qinv = [[q22 * dinv, SymExpr.of(0) - q12 * dinv],
                [SymExpr.of(0) - q21 * dinv, q11 * dinv]]
        from .symflow import mat_mul
        mats.append(mat_mul(mat_mul(qm, mid), qinv))
    return FlowExpr(mats[0], mats[1], kpar)


def _quad_of_unirat(u: UniRat) -> VerticalQuadratic:
    if not u.is_polynomial() or u.poly().degree() > 2:
        raise NotIntegrable("component is not a polynomial of degree <= 2")
    p = u.poly()
    return VerticalQuadratic(a=UniRat.of(UniPoly([p.coeff(2)])),
                             b=UniRat.of(UniPoly([p.coeff(1) / Scalar.of(2)])),
                             c=UniRat.of(UniPoly([p.coeff(0)])))


def adapt_to_fibration(X: VectorField, F: BiRat,
                       factored=None) -> Tuple[BirationalMap, VectorField]:
    """Change charts so a first integral F becomes the base coordinate.

    F must be a Mobius function of exactly one variable over the function
    field of the other; the returned map sends (x, y) to (F, other variable)
    and the pushforward of X is vertical in the new chart.
    """
    F = BiRat.of(F)
    if F.is_constant():
        raise ConstantIntegral("adaptation needs a non-constant integral")
    if not first_integral_check(X, F, factored=factored):
        raise NotAFirstIntegral("F is not a first integral of X")
    my = _mobius_split(F, "y") if F.depends_on_y() else None
    mx = _mobius_split(F, "x") if F.depends_on_x() else None
    surface = X.surface
    if my is not None:
        # psi = (F(x,y), x); the inverse solves u = F(v, y) for y at x = v
        A, B, C, D = my
        u = BiRat.x()
        # A..D depend on x only; in the new chart the old x is the y-coordinate
        Av, Bv, Cv, Dv = (g.subst(BiRat.y(), BiRat.y()) for g in (A, B, C, D))
        y_back = (Bv - u * Dv) / (u * Cv - Av)
        psi = BirationalMap(surface, surface, F, BiRat.x(),
                            inverse=(BiRat.y(), y_back))
        pushed = _pushforward_adapted(X, psi)
        return psi, pushed
    if mx is not None:
        # psi = (F(x,y), y); A..D depend on y only, which keeps its name
        A, B, C, D = mx
        u = BiRat.x()
        x_back = (B - u * D) / (u * C - A)
        psi = BirationalMap(surface, surface, F, BiRat.y(),
                            inverse=(x_back, BiRat.y()))
        pushed = _pushforward_adapted(X, psi)
        return psi, pushed
    raise CannotAdapt("F is a Mobius function of neither variable")


def _pushforward_adapted(X: VectorField, psi: BirationalMap) -> VectorField:
    """psi_* X for psi = (F, second): the base component X(F) vanishes, the
    fiber one is X(second) rewritten in the new coordinates via psi^{-1}."""
    fiber_speed = X.apply_to(psi.f2)
    inv = psi.inverse()
    new_py = fiber_speed.subst(inv.f1, inv.f2)
    return VectorField.vertical(X.surface, new_py)
