from fractions import Fraction

import pytest

from birfields.bipoly import BiRat
from birfields.catalog import (a1_x_a1, borel_a2, borel_b2, borel_g2,
                               builtin_catalog, g0_basis, g2tilde_basis,
                               g4tilde_basis, gn_basis)
from birfields.errors import (NotAnAlgebra, NotClosed, NotIndependent,
                              Unclassified, UnknownName)
from birfields.fields import VectorField, lie_bracket, pullback
from birfields.lie import (classify_2dim, derived_series, killing_report,
                           structure_constants, two_dim_model_basis,
                           verify_sl2_triple, TwoDimLabel, _spans_equal)
from birfields.scalars import Scalar
from birfields.surfaces import F0, P2, SurfaceModel

x, y = BiRat.x(), BiRat.y()
zero, one = BiRat.zero(), BiRat.one()
S = Scalar.of


class TestStructureConstants:
    def test_sl2_from_fields(self):
        pres = structure_constants(g0_basis()).validate()
        # eq_lie with (X, Y, Z) = (e0, e1, e2)
        assert pres.constants[0][1] == [S(1), S(0), S(0)]
        assert pres.constants[0][2] == [S(0), S(2), S(0)]
        assert pres.constants[1][2] == [S(0), S(0), S(1)]

    def test_not_closed_with_witness(self):
        with pytest.raises(NotClosed) as ei:
            structure_constants([VectorField(F0, zero, x),
                                 VectorField(F0, zero, y * y)])
        assert ei.value.witness == VectorField(F0, zero, 2 * x * y)

    def test_affine(self):
        pres = structure_constants([VectorField(F0, one, zero),
                                    VectorField(F0, x, zero)])
        assert pres.constants[0][1][0] == S(1)

    def test_not_independent(self):
        with pytest.raises(NotIndependent):
            structure_constants([VectorField(F0, zero, y),
                                 VectorField(F0, zero, 2 * y)])


class TestDerivedSeries:
    def test_b2_exact_value(self):
        # NOTE: the cited fingerprint (6,4,3,0) overstates the second term;
        # brackets inside C·dx + C_n[x]·dy drop the x-degree, so B2^(2) is
        # C_1[x]·dy of dimension 2.
        dims, bases = derived_series(builtin_catalog("Bn", 2))
        assert dims == [6, 4, 2, 0]

    def test_borel_g2(self):
        dims, _ = derived_series(builtin_catalog("BorelG2"))
        assert dims == [8, 6, 4, 1, 0]
        assert dims[3] == 1

    def test_abelian(self):
        pres = structure_constants([VectorField(F0, one, zero),
                                    VectorField(F0, zero, one)])
        dims, _ = derived_series(pres)
        assert dims == [2, 0]

    def test_quotient_dimension_rank_bound(self):
        for n in range(6):
            dims, _ = derived_series(builtin_catalog("Bn", n))
            assert dims[0] - dims[1] == 2

    def test_borel_a2_and_b2(self):
        dims, _ = derived_series(builtin_catalog("BorelA2"))
        assert dims == [5, 3, 1, 0]
        dims, _ = derived_series(builtin_catalog("BorelB2"))
        assert dims == [6, 4, 2, 0]


class TestKilling:
    def test_semisimple_catalog(self):
        for name in ["g0", "gn(2)", "g2tilde", "g4tilde", "AutF0", "AutP2", "A1xA1"]:
            kr = killing_report(builtin_catalog(name))
            assert kr.is_semisimple and not kr.is_solvable, name

    def test_solvable_borels(self):
        for n in range(4):
            kr = killing_report(builtin_catalog("Bn", n))
            assert kr.is_solvable and not kr.is_semisimple
        for name in ["BorelA2", "BorelB2", "BorelG2"]:
            kr = killing_report(builtin_catalog(name))
            assert kr.is_solvable and not kr.is_semisimple, name

    def test_one_dimensional(self):
        pres = structure_constants([VectorField(F0, zero, one)])
        kr = killing_report(pres)
        assert kr.is_solvable and kr.matrix == [[S(0)]]

    def test_sl2_killing_matrix_frozen_oracle(self):
        # oracle: the three ad-matrices of (dy, y dy, y² dy) built by hand
        # from eq_lie and traced pairwise give [[0,0,-4],[0,2,0],[-4,0,0]],
        # det -32
        kr = killing_report(structure_constants(g0_basis()))
        expected = [[S(0), S(0), S(-4)], [S(0), S(2), S(0)], [S(-4), S(0), S(0)]]
        assert kr.matrix == expected
        assert kr.det == S(-32) and kr.is_semisimple

    def test_killing_agrees_with_series_on_random_small_algebras(self, rng):
        # random 2-dim subalgebras of B_2
        from birfields.fields import borel_basis
        basis = borel_basis(2)
        tested = 0
        while tested < 6:
            c = [S(rng.randint(-2, 2)) for _ in basis]
            d = [S(rng.randint(-2, 2)) for _ in basis]
            A = basis[0].scale(c[0])
            B = basis[0].scale(d[0])
            for Bb, ci, di in zip(basis[1:], c[1:], d[1:]):
                A = A + Bb.scale(ci)
                B = B + Bb.scale(di)
            try:
                pres = structure_constants([A, B])
            except (NotClosed, NotIndependent):
                continue
            kr = killing_report(pres)
            dims, _ = derived_series(pres)
            assert kr.is_solvable == (dims[-1] == 0)
            tested += 1


class TestCatalog:
    def test_jacobi_validated_at_load(self):
        for name in ["BorelA2", "BorelB2", "BorelG2", "A1xA1"]:
            builtin_catalog(name).validate()

    def test_concrete_dimensions(self):
        assert builtin_catalog("AutP2").dim == 8
        assert builtin_catalog("AutF0").dim == 6
        assert builtin_catalog("AutFn(2)").dim == 7
        assert builtin_catalog("Bn(3)").dim == 7
        assert builtin_catalog("gn(4)").dim == 3

    def test_unknown_name(self):
        with pytest.raises(UnknownName):
            builtin_catalog("nonsense")

    def test_g4tilde_conic_infinitesimal_invariance(self):
        # every field in the basis satisfies X(x²+y²+1) ≡ 0 mod (x²+y²+1)
        from birfields.bipoly import bi_divexact
        conic = (x * x + y * y + 1).num
        for X in g4tilde_basis():
            val = X.apply_to(BiRat(conic))
            if val.is_zero():
                continue
            assert val.is_polynomial()
            bi_divexact(val.num, conic)  # raises if not divisible

    def test_g4tilde_is_cyclic_so3(self):
        A, B, C = g4tilde_basis()
        assert lie_bracket(A, B) == C
        assert lie_bracket(B, C) == A
        assert lie_bracket(C, A) == B


class TestVerifySl2:
    def test_models(self):
        assert verify_sl2_triple(*g0_basis())
        for n in range(1, 5):
            assert verify_sl2_triple(*gn_basis(n))
        assert verify_sl2_triple(*g2tilde_basis())

    def test_negative(self):
        assert not verify_sl2_triple(VectorField(F0, zero, one),
                                     VectorField(F0, zero, y),
                                     VectorField(F0, one, zero))


class TestClassify2Dim:
    def test_cgamma(self):
        r = classify_2dim(VectorField(F0, zero, one), VectorField(F0, x, 3 * y))
        assert r.label.kind == "cgamma" and r.label.gamma == S(3)
        assert r.chain.is_identity()

    def test_collinear_abelian(self):
        r = classify_2dim(VectorField(F0, zero, one), VectorField(F0, zero, x))
        assert r.label.kind == "CollinearAbelian"
        assert str(r.label.h) == "x"
        assert r.target_surface == SurfaceModel.fn(1)

    def test_collinear_affine_after_swap(self):
        r = classify_2dim(VectorField(F0, one, zero), VectorField(F0, x, zero))
        assert r.label.kind == "CollinearAffine"
        assert _spans_equal(list(r.landed), r.model_basis())

    def test_a01_reduction(self):
        r = classify_2dim(VectorField(F0, one, y), VectorField(F0, zero, y))
        assert r.label.kind == "a01"
        assert _spans_equal(list(r.landed), r.model_basis())

    def test_idempotent_on_models(self):
        labels = [TwoDimLabel("a00"), TwoDimLabel("a01"), TwoDimLabel("a11"),
                  TwoDimLabel("cgamma", gamma=S(5)),
                  TwoDimLabel("cgamma", gamma=Scalar.i()),
                  TwoDimLabel("d"), TwoDimLabel("fn", n=1),
                  TwoDimLabel("fn", n=3), TwoDimLabel("CollinearAffine")]
        for label in labels:
            surf = SurfaceModel.fn(label.n) if label.kind == "fn" else F0
            mb = two_dim_model_basis(label, surf)
            r = classify_2dim(mb[0], mb[1])
            assert r.label.kind == label.kind
            if label.gamma is not None:
                assert r.label.gamma == label.gamma
            if label.n is not None:
                assert r.label.n == label.n
            assert _spans_equal(list(r.landed), r.model_basis())

    def test_witness_chain_lands_on_model(self, rng):
        # conjugated + basis-changed inputs land exactly on the model span
        from birfields.fields import BirationalMap
        for label in [TwoDimLabel("cgamma", gamma=S(-2)), TwoDimLabel("d"),
                      TwoDimLabel("a11"), TwoDimLabel("a00")]:
            mb = two_dim_model_basis(label, F0)
            A = mb[0].scale(S(2)) + mb[1].scale(S(3))
            B = mb[0] + mb[1].scale(S(2))
            mp = BirationalMap(F0, F0, x + 2, y, inverse=(x - 2, y))
            A2, B2 = pullback(A, mp), pullback(B, mp)
            r = classify_2dim(A2, B2)
            assert r.label.kind == label.kind
            assert _spans_equal(list(r.landed), r.model_basis())
            # the chain transports the input span onto the landed span
            chained = [pullback(A2, r.chain), pullback(B2, r.chain)]
            assert _spans_equal(chained, list(r.landed))

    def test_not_an_algebra(self):
        with pytest.raises(NotAnAlgebra):
            classify_2dim(VectorField(F0, zero, x), VectorField(F0, zero, y * y))

    def test_unclassified_outside_moves(self):
        # the abelian pair <dy + y dx, dx> is closed and non-collinear but its
        # y·d/dx term is outside the Borel shape the moves can reach
        with pytest.raises(Unclassified):
            classify_2dim(VectorField(P2, y, one), VectorField(P2, one, zero))

    def test_cgamma_sign_equivalence_positive_direction(self):
        # c_gamma and c_{-gamma} are related by the explicit chart flip
        from birfields.fields import BirationalMap
        g = S(Fraction(5, 2))
        flip = BirationalMap(F0, F0, 1 / x, y, inverse=(1 / x, y))
        moved = [pullback(F, flip)
                 for F in two_dim_model_basis(TwoDimLabel("cgamma", gamma=g), F0)]
        r = classify_2dim(moved[0], moved[1])
        assert r.label.kind == "cgamma" and r.label.gamma == -g

    def test_vertical_quadratic_collinear_pair(self):
        # X = y² d/dy with partner (-y + c y²) d/dy: affine collinear through
        # the kappa = 0 regularizer
        Xf = VectorField(F0, zero, y * y)
        Yf = VectorField(F0, zero, -y + 2 * y * y)
        assert lie_bracket(Xf, Yf) == Xf
        r = classify_2dim(Xf, Yf)
        assert r.label.kind == "CollinearAffine"
        assert _spans_equal(list(r.landed), r.model_basis())


class TestRankTwoRecordedCases:
    """Recorded constructions from the rank-2 analysis: the A2 copy inside
    aut(P2) is reconstructed concretely, and the B2 extension problem is
    recorded as an exactly-unsolvable linear system."""

    def test_a2_reconstruction_inside_aut_p2(self):
        R_x = VectorField(P2, x * x, x * y)      # x·(x dx + y dy)
        R_y = VectorField(P2, x * y, y * y)      # y·(x dx + y dy)
        h1, h2 = VectorField(P2, x, zero), VectorField(P2, zero, y)
        v1p, v2p, v3p = (VectorField(P2, one, zero), VectorField(P2, zero, x),
                         VectorField(P2, zero, one))
        v1m, v2m, v3m = R_x, VectorField(P2, y, zero), R_y
        from birfields.fields import field_in_span
        # positive-root chain [v1+, v2+] = v3+
        assert lie_bracket(v1p, v2p) == v3p
        # [vi+, vi-] lands in the Cartan, nonzero
        for vp, vm in ((v1p, v1m), (v2p, v2m), (v3p, v3m)):
            br = lie_bracket(vp, vm)
            ok, coeffs = field_in_span([h1, h2], br)
            assert ok and any(not c.is_zero() for c in coeffs)
        # cross relations [v1±, v3∓] ⊂ <v2∓>, [v2±, v3∓] ⊂ <v1∓>
        assert field_in_span([v2m], lie_bracket(v1p, v3m))[0]
        assert field_in_span([v1m], lie_bracket(v2p, v3m))[0]
        assert field_in_span([v2p], lie_bracket(v1m, v3p))[0]
        assert field_in_span([v1p], lie_bracket(v2m, v3p))[0]
        # the eight fields span aut(P2) exactly
        pres = structure_constants([h1, h2, v1p, v2p, v3p, v1m, v2m, v3m])
        assert pres.dim == 8
        kr = killing_report(pres)
        assert kr.is_semisimple

    def test_b2_extension_obstruction(self):
        # with the Borel of B2 placed as beta(v10+, v01+, v11+, v21+) =
        # (dx, x² dy, x dy, dy), a lowering vector W for the long simple root
        # would need [dx, W] = 0 and [x² dy, W] = a·x dx + b·y dy with
        # (a, b) != 0; the linear system over polynomial fields of total
        # degree <= 6 admits no such W
        from birfields.linsolve import solve_linear
        from birfields.scalars import Scalar
        deg = 6
        candidates = []
        for comp in (0, 1):
            for i in range(deg + 1):
                for j in range(deg + 1 - i):
                    px = (x ** i) * (y ** j) if comp == 0 else zero
                    py = (x ** i) * (y ** j) if comp == 1 else zero
                    candidates.append(VectorField(P2, px, py))
        dx_field = VectorField(P2, one, zero)
        raise_field = VectorField(P2, zero, x * x)
        h1, h2 = VectorField(P2, x, zero), VectorField(P2, zero, y)
        # unknowns: candidate coefficients plus (a, b)
        cols = []
        for W in candidates:
            c1 = lie_bracket(dx_field, W)
            c2 = lie_bracket(raise_field, W)
            cols.append((c1, c2))
        monos = set()
        for c1, c2 in cols:
            for f in (c1.px, c1.py, c2.px, c2.py):
                monos.update(f.num.terms)
        for f in (h1.px, h2.py):
            monos.update(f.num.terms)
        monos = sorted(monos)
        rows = []
        rhs = []
        S0_ = Scalar.zero()
        # rows: [dx, W] = 0 (both components), then [x² dy, W] - a·x dx - b·y dy = 0
        for comp in range(2):
            for m in monos:
                row = []
                for c1, c2 in cols:
                    f = (c1.px, c1.py)[comp]
                    row.append(f.num.coeff(m) if f.den.is_constant() else S0_)
                row.extend([S0_, S0_])
                rows.append(row)
                rhs.append(S0_)
        for comp in range(2):
            for m in monos:
                row = []
                for c1, c2 in cols:
                    f = (c2.px, c2.py)[comp]
                    row.append(f.num.coeff(m) if f.den.is_constant() else S0_)
                a_f = (h1.px, h1.py)[comp]
                b_f = (h2.px, h2.py)[comp]
                row.append(-a_f.num.coeff(m))
                row.append(-b_f.num.coeff(m))
                rows.append(row)
                rhs.append(S0_)
        sol, hom = solve_linear(rows, rhs)
        n = len(candidates)
        # every homogeneous solution has a = b = 0: no sl2 pair for the root
        for vec in hom:
            assert vec[n].is_zero() and vec[n + 1].is_zero()
        assert sol[n].is_zero() and sol[n + 1].is_zero()


class TestFnFamilyLandings:
    """R_m with a monomial vertical partner covers both signs of the residual
    exponent; every landing must hit the f_n model span exactly."""

    def test_positive_and_negative_residues(self):
        cases = [(1, 0, 1), (2, 0, 2), (1, 2, 1), (0, 1, 1), (2, 1, 1),
                 (1, 1, None)]
        for m, j, expected_n in cases:
            FN = SurfaceModel.fn(max(m, j, 2))
            V = VectorField(FN, x, y * S(m) + x ** m)
            W = VectorField(FN, zero, x ** j)
            r = classify_2dim(V, W)
            lam = j - m
            if lam == 0:
                assert r.label.kind == "a01"
            else:
                assert r.label.kind == "fn" and r.label.n == abs(lam)
                assert r.label.n == expected_n
            assert _spans_equal(list(r.landed), r.model_basis())

    def test_flip_branch_respects_scale(self):
        # the lambda > 0 branch needs the trailing y-rescale
        F2 = SurfaceModel.fn(2)
        r = classify_2dim(VectorField(F2, x, y + x),
                          VectorField(F2, zero, x * x))
        assert r.label.kind == "fn" and r.label.n == 1
        assert _spans_equal(list(r.landed), r.model_basis())
