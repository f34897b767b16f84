"""Exact linear algebra over Scalar: Gaussian elimination and coefficient matching."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .bipoly import BiPoly, BiRat
from .errors import NoSolution
from .scalars import Scalar

S0 = Scalar.zero()
S1 = Scalar.one()


def solve_linear(rows: List[List[Scalar]], rhs: List[Scalar]):
    """Solve A·v = rhs exactly.

    Returns (particular solution, basis of the homogeneous solution space).
    Raises NoSolution when the system is inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [[Scalar.of(c) for c in row] + [Scalar.of(rhs[k])]
           for k, row in enumerate(rows)]
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(n):
        pr = next((k for k in range(r, m) if not aug[k][c].is_zero()), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [v * inv for v in aug[r]]
        for k in range(m):
            if k != r and not aug[k][c].is_zero():
                f = aug[k][c]
                aug[k] = [vk if vr.is_zero() else vk - f * vr
                          for vk, vr in zip(aug[k], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for k in range(r, m):
        if not aug[k][n].is_zero():
            raise NoSolution("inconsistent linear system")
    sol = [S0] * n
    pivot_cols = {c for _, c in pivots}
    for pr, pc in pivots:
        sol[pc] = aug[pr][n]
    basis: List[List[Scalar]] = []
    for free in range(n):
        if free in pivot_cols:
            continue
        vec = [S0] * n
        vec[free] = S1
        for pr, pc in pivots:
            vec[pc] = -aug[pr][free]
        basis.append(vec)
    return sol, basis


def rank(rows: List[List[Scalar]]) -> int:
    if not rows:
        return 0
    _, hom = solve_linear(rows, [S0] * len(rows))
    return len(rows[0]) - len(hom)


def _collect_monomials(polys: Sequence[BiPoly]):
    monos = set()
    for p in polys:
        monos.update(p.terms)
    return sorted(monos)


def coeff_match_solve(generators: Sequence[BiRat], target: BiRat):
    """Solve sum_k v_k·generators[k] = target for exact Scalars v_k.

    Clears denominators, matches monomial coefficients and solves the linear
    system.  Returns (solution vector, homogeneous basis); raises NoSolution.
    """
    generators = [BiRat.of(g) for g in generators]
    target = BiRat.of(target)
    dens = [g.den for g in generators] + [target.den]
    cleared = [g.num * _without(dens, g.den) for g in generators]
    t_num = target.num * _without(dens, target.den)
    monos = _collect_monomials(cleared + [t_num])
    rows = [[p.coeff(m) for p in cleared] for m in monos]
    rhs = [t_num.coeff(m) for m in monos]
    if not rows:
        return [S0] * len(generators), _identity_basis(len(generators))
    return solve_linear(rows, rhs)


def coeff_match_solve_system(relations):
    """Solve several coefficient-matching relations with shared unknowns.

    `relations` is a list of (generators, target) pairs, every generator list
    having the same length; returns (solution, homogeneous basis).
    """
    rows: List[List[Scalar]] = []
    rhs: List[Scalar] = []
    width = None
    for generators, target in relations:
        generators = [BiRat.of(g) for g in generators]
        target = BiRat.of(target)
        if width is None:
            width = len(generators)
        elif len(generators) != width:
            raise ValueError("relations must share the unknown vector")
        dens = [g.den for g in generators] + [target.den]
        cleared = [g.num * _without(dens, g.den) for g in generators]
        t_num = target.num * _without(dens, target.den)
        for m in _collect_monomials(cleared + [t_num]):
            rows.append([p.coeff(m) for p in cleared])
            rhs.append(t_num.coeff(m))
    if not rows:
        return [S0] * (width or 0), _identity_basis(width or 0)
    return solve_linear(rows, rhs)


def _without(dens: List[BiPoly], skip: BiPoly) -> BiPoly:
    out = BiPoly.of(1)
    skipped = False
    for d in dens:
        if d is skip and not skipped:
            skipped = True
            continue
        out = out * d
    return out


def _identity_basis(n: int) -> List[List[Scalar]]:
    out = []
    for k in range(n):
        vec = [S0] * n
        vec[k] = S1
        out.append(vec)
    return out


def in_span(generators: Sequence[BiRat], target: BiRat) -> Optional[List[Scalar]]:
    """Coefficient vector expressing target in the span, or None."""
    try:
        sol, _ = coeff_match_solve(generators, target)
    except NoSolution:
        return None
    return sol
