from fractions import Fraction

import pytest

from birfields.bipoly import BiRat
from birfields.errors import (CharPolyDoesNotSplit, NotInAutP2, NotInBorel,
                              NothingToReduce, NotUnimodular)
from birfields.fields import VectorField, pullback
from birfields.integrability import integrability_test
from birfields.normal_forms import (classify_p2, hgamma_relate, mat3, mat3_det,
                                    mat3_inverse, mat3_mul, mat3_trace,
                                    normal_form_field, normalize_in_borel,
                                    phi_inv, phi_iso,
                                    projective_map_of_matrix, reduce_to_TLJH)
from birfields.scalars import Scalar
from birfields.surfaces import F0, P2, SurfaceModel
from birfields.unipoly import UniRat

x, y = BiRat.x(), BiRat.y()
zero, one = BiRat.zero(), BiRat.one()
S = Scalar.of


class TestPhi:
    def test_T_matrix(self):
        A = mat3([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
        assert phi_iso(A) == VectorField(P2, zero, one)

    def test_H_gamma_matrix(self):
        g = S(3)
        A = mat3([[(S(2) - g) / 3, 0, 0],
                  [0, (g * 2 - S(1)) / 3, 0],
                  [0, 0, -(g + S(1)) / 3]])
        assert phi_iso(A) == VectorField(P2, x, 3 * y)

    def test_zero_linearity(self):
        assert phi_iso(mat3([[0] * 3] * 3)).is_zero()

    def test_N_conjugate_matrix(self):
        A = mat3([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert phi_iso(A) == VectorField(P2, y, one)

    def test_phi_inv_examples(self):
        A = phi_inv(VectorField(P2, y, one))
        assert A == mat3([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        # y² d/dy + xy d/dx = y·(x d/dx + y d/dy): solved in the 8-dim basis
        X = VectorField(P2, x * y, y * y)
        assert phi_iso(phi_inv(X)) == X

    def test_phi_inv_rejects(self):
        with pytest.raises(NotInAutP2):
            phi_inv(VectorField(P2, y ** 3, zero))

    def test_round_trips(self, rng):
        from conftest import rand_scalar
        for _ in range(10):
            A = [[rand_scalar(rng) for _ in range(3)] for _ in range(3)]
            tr = mat3_trace(A) / 3
            for k in range(3):
                A[k][k] = A[k][k] - tr
            assert phi_inv(phi_iso(A)) == A

    def test_bracket_sign_is_global(self, rng):
        # determine sigma with [Phi(A), Phi(B)] = Phi(sigma·[A, B]) on basis
        # pairs by brute force, then assert it on random matrices
        from birfields.fields import lie_bracket
        from conftest import rand_scalar

        def lie3(A, B):
            AB = mat3_mul(A, B)
            BA = mat3_mul(B, A)
            return [[AB[i][j] - BA[i][j] for j in range(3)] for i in range(3)]

        def traceless(idx_i, idx_j):
            A = [[Scalar.zero()] * 3 for _ in range(3)]
            A[idx_i][idx_j] = Scalar.one()
            if idx_i == idx_j:
                A[2][2] = A[2][2] - Scalar.one()
            return A

        sigmas = set()
        basis_positions = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (0, 0), (1, 1)]
        for pi in basis_positions:
            for pj in basis_positions:
                A, B = traceless(*pi), traceless(*pj)
                lhs = lie_bracket(phi_iso(A), phi_iso(B))
                rhs = phi_iso(lie3(A, B))
                if rhs.is_zero():
                    assert lhs.is_zero()
                    continue
                if lhs == rhs:
                    sigmas.add(1)
                elif lhs == rhs.scale(S(-1)):
                    sigmas.add(-1)
                else:
                    raise AssertionError("no global sign")
        assert len(sigmas) == 1
        sigma = sigmas.pop()
        for _ in range(5):
            A = [[rand_scalar(rng) for _ in range(3)] for _ in range(3)]
            B = [[rand_scalar(rng) for _ in range(3)] for _ in range(3)]
            for M in (A, B):
                tr = mat3_trace(M) / 3
                for k in range(3):
                    M[k][k] = M[k][k] - tr
            lhs = lie_bracket(phi_iso(A), phi_iso(B))
            rhs = phi_iso(lie3(A, B)).scale(S(sigma))
            assert lhs == rhs


class TestClassifyP2:
    def test_T_trivial(self):
        r = classify_p2(VectorField(P2, zero, one))
        assert r.label.kind == "T" and r.conjugator is not None

    def test_N_with_witness(self):
        X = VectorField(P2, y, one)
        r = classify_p2(X)
        assert r.label.kind == "N"
        assert pullback(X, r.conjugator) == normal_form_field(r.label, P2).scale(r.scale)

    def test_H2_diagonal(self):
        r = classify_p2(VectorField(P2, x, 2 * y))
        assert r.label.kind == "Hgamma" and r.label.gamma == S(2)

    def test_all_labels_with_random_conjugation(self, rng):
        from conftest import rand_scalar
        cases = [(VectorField(P2, one, x), "N"),
                 (VectorField(P2, x, 2 * y), "Hgamma"),
                 (VectorField(P2, zero, one), "T"),
                 (VectorField(P2, one, y), "J")]
        for base, kind in cases:
            for _ in range(2):
                while True:
                    C = [[rand_scalar(rng) for _ in range(3)] for _ in range(3)]
                    if not mat3_det(C).is_zero():
                        break
                Xc = pullback(base, projective_map_of_matrix(C))
                rc = classify_p2(Xc)
                assert rc.label.kind == kind
                w = pullback(Xc, rc.conjugator)
                assert w == normal_form_field(rc.label, P2).scale(rc.scale)

    def test_charpoly_does_not_split(self):
        # eigenvalues are roots of t³ - 3t - 1 irreducible over Q(i):
        # companion-style traceless matrix
        A = mat3([[0, 1, 0], [0, 0, 1], [1, 3, 0]])
        X = phi_iso(A)
        with pytest.raises(CharPolyDoesNotSplit):
            classify_p2(X)

    def test_quadratic_extension_split(self):
        # diag(s, -s, 0)-type spectrum with s = sqrt(2): matrix [[0,1,0],[2,0,0],[0,0,0]]
        A = mat3([[0, 1, 0], [2, 0, 0], [0, 0, 0]])
        X = phi_iso(A)
        r = classify_p2(X)
        assert r.label.kind == "Hgamma"
        assert r.context.d is not None
        w = pullback(X, r.conjugator)
        assert w == normal_form_field(r.label, P2).scale(r.scale)

    def test_jordan_type_separates_J_from_H(self):
        # the J class carries a saddle-node: its matrix has a repeated
        # eigenvalue with a defective eigenspace, while any H_gamma matrix is
        # diagonalizable — this Jordan-type invariant separates the labels
        from birfields.normal_forms import (mat3_identity, mat3_rank,
                                            mat3_scale, mat3_sub)
        J = VectorField(P2, one, y)
        AJ = phi_inv(J)
        lam = Scalar.of(Fraction(-1, 3))  # double eigenvalue of the J matrix
        shifted = mat3_sub(AJ, mat3_scale(mat3_identity(), lam))
        assert mat3_rank(shifted) == 2  # eigenspace dim 1 < multiplicity 2
        H = VectorField(P2, x, Scalar.of(Fraction(1, 2)) * y)  # H_{1/2}: eigs (1/2,0,-1/2)
        rJ, rH = classify_p2(J), classify_p2(H)
        assert rJ.label.kind == "J" and rH.label.kind == "Hgamma"


class TestNormalizeInBorel:
    def test_spec_example_J(self):
        F2 = SurfaceModel.fn(2)
        X = VectorField(F2, one, y + x * x)
        r = normalize_in_borel(X, 2)
        assert r.label.kind == "J"
        assert pullback(X, r.conjugator) == normal_form_field(r.label, F2).scale(r.scale)
        # the shear is exactly y -> y + q with q = -x² - 2x - 2
        assert r.conjugator.f2 == y - x * x - 2 * x - 2

    def test_spec_example_H2(self):
        F1 = SurfaceModel.fn(1)
        X = VectorField(F1, x, 2 * y + x)
        r = normalize_in_borel(X, 1)
        assert r.label.kind == "Hgamma" and r.label.gamma == S(2)
        assert r.conjugator.f2 == y - x
        assert pullback(X, r.conjugator) == normal_form_field(r.label, F1).scale(r.scale)

    def test_spec_example_R1(self):
        F1 = SurfaceModel.fn(1)
        X = VectorField(F1, x, y + x)
        r = normalize_in_borel(X, 1)
        assert r.label.kind == "Rm" and r.label.m == 1
        assert pullback(X, r.conjugator) == normal_form_field(r.label, F1).scale(r.scale)

    def test_vertical_cases(self):
        F1 = SurfaceModel.fn(1)
        r = normalize_in_borel(VectorField(F1, zero, 3 * y + x), 1)
        assert r.label.kind == "L" and r.scale == S(3)
        r = normalize_in_borel(VectorField(F1, zero, x), 1)
        assert r.label.kind == "VerticalPoly" and r.label.p == UniRat.x()

    def test_eps_cases(self):
        F2 = SurfaceModel.fn(2)
        X = VectorField(F2, one, 3 * x * x + x + 1)
        r = normalize_in_borel(X, 2)
        assert r.label.kind == "DxPlusEps" and r.label.eps == 1
        assert pullback(X, r.conjugator) == normal_form_field(r.label, F2).scale(r.scale)

    def test_not_in_borel(self):
        with pytest.raises(NotInBorel):
            normalize_in_borel(VectorField(F0, y, zero), 0)

    def test_witness_preserves_borel(self):
        # pullback of every B_n basis element by the witness stays in B_n
        from birfields.fields import borel_basis, field_in_span
        F2 = SurfaceModel.fn(2)
        X = VectorField(F2, one, y + x * x)
        r = normalize_in_borel(X, 2)
        basis = borel_basis(2)
        for B in basis:
            ok, _ = field_in_span(basis, pullback(B, r.conjugator))
            assert ok


class TestReduce:
    def test_vertical_poly_to_T(self):
        F1 = SurfaceModel.fn(1)
        r = normalize_in_borel(VectorField(F1, zero, x), 1)
        red = reduce_to_TLJH(r)
        assert red.label.kind == "T"
        mid = normal_form_field(r.label, F1)
        assert pullback(mid, red.residual_reduction) == normal_form_field(red.label, F1)
        # the reduction is f1 = (x, y·p(x))
        assert red.residual_reduction.f2 == y * x

    def test_rm_to_J(self):
        F1 = SurfaceModel.fn(1)
        r = normalize_in_borel(VectorField(F1, x, y + x), 1)
        red = reduce_to_TLJH(r)
        assert red.label.kind == "J"
        mid = normal_form_field(r.label, F1)
        assert pullback(mid, red.residual_reduction) == normal_form_field(red.label, F1)
        assert red.residual_reduction.f1 == y and red.residual_reduction.f2 == y * x

    def test_dx_to_T_by_swap(self):
        F2 = SurfaceModel.fn(2)
        r = normalize_in_borel(VectorField(F2, one, zero), 2)
        assert r.label.kind == "DxPlusEps" and r.label.eps == 0
        red = reduce_to_TLJH(r)
        assert red.label.kind == "T"
        mid = normal_form_field(r.label, F2)
        assert pullback(mid, red.residual_reduction) == normal_form_field(red.label, F2)

    def test_terminal_raises(self):
        F1 = SurfaceModel.fn(1)
        r = normalize_in_borel(VectorField(F1, x, 2 * y + x), 1)
        with pytest.raises(NothingToReduce):
            reduce_to_TLJH(r)

    def test_T_vs_L_kappa_separation(self):
        # terminal labels distinguished by kappa after verticalization
        repT = integrability_test(VectorField.vertical(F0, one))
        repL = integrability_test(VectorField.vertical(F0, y))
        assert repT.kappa.is_zero() and not repL.kappa.is_zero()


class TestHgamma:
    def test_gamma_2_shift(self):
        g2, mp, ver = hgamma_relate(S(2), [[1, 1], [0, 1]])
        assert g2 == S(3) and ver
        assert mp.f1 == x and mp.f2 == y / x

    def test_identity(self):
        g, mp, ver = hgamma_relate(S(Fraction(7, 3)), [[1, 0], [0, 1]])
        assert g == S(Fraction(7, 3)) and ver

    def test_rational_gamma_related_to_zero(self):
        # 5/3 = b/d with ad - bc = 1: transport from H_0
        g, mp, ver = hgamma_relate(S(0), [[2, 5], [1, 3]])
        assert g == S(Fraction(5, 3)) and ver

    def test_rejects_non_unimodular(self):
        with pytest.raises(NotUnimodular):
            hgamma_relate(S(2), [[2, 0], [0, 2]])

    def test_gaussian_gamma(self):
        g, mp, ver = hgamma_relate(Scalar.i(), [[0, 1], [1, 0]])
        assert ver and g == Scalar(0, -1)
