from fractions import Fraction

import pytest

from birfields.bipoly import BiRat
from birfields.errors import ConstantIntegral, NotBirational, SurfaceMismatch
from birfields.fields import (BirationalMap, VectorField, first_integral_check,
                              lie_bracket, membership, polar_divisor,
                              polar_tangency_check, pullback, pushforward,
                              wedge_collinear)
from birfields.scalars import Scalar
from birfields.surfaces import F0, P2, SurfaceModel

x, y = BiRat.x(), BiRat.y()
zero, one = BiRat.zero(), BiRat.one()


def V(surface, px, py):
    return VectorField(surface, px, py)


class TestBracket:
    def test_paper_example(self):
        assert lie_bracket(V(P2, zero, x), V(P2, zero, y * y)) == V(P2, zero, 2 * x * y)

    def test_antisymmetry_trivial(self):
        dy = V(F0, zero, one)
        assert lie_bracket(dy, dy).is_zero()

    def test_sl2_ladder(self):
        # oracle: direct symbolic differentiation
        dy, ydy, y2dy = V(F0, zero, one), V(F0, zero, y), V(F0, zero, y * y)
        assert lie_bracket(dy, ydy) == dy
        assert lie_bracket(dy, y2dy) == V(F0, zero, 2 * y)
        assert lie_bracket(ydy, y2dy) == y2dy

    def test_surface_mismatch(self):
        with pytest.raises(SurfaceMismatch):
            lie_bracket(V(P2, zero, one), V(F0, zero, one))


class TestPullback:
    def test_example_1(self):
        f = BirationalMap(P2, P2, y / (x + 1), y / (x - 1))
        Y = V(P2, x + 1, one)
        X0 = pullback(Y, f)
        assert X0 == V(P2, (x * x - 1) * (y + 2) / (2 * y), y / 2 + 2 * x + x * y / 2)

    def test_identity(self):
        Y = V(F0, x * y, y * y + 1)
        assert pullback(Y, BirationalMap.identity(F0)) == Y

    def test_rm_to_j(self):
        F1 = SurfaceModel.fn(1)
        Rm = V(F1, x, y + x)
        f2 = BirationalMap(F1, F1, y, y * x)
        assert pullback(Rm, f2) == V(F1, one, y)

    def test_h2_basis_transport(self):
        # pullbacks land on scalar multiples of the displayed basis
        h2 = BirationalMap(F0, F0, (x + y) / 2, (x - y) / 2)
        got = [pullback(V(F0, one, one), h2),
               pullback(V(F0, x, y), h2),
               pullback(V(F0, x * x, y * y), h2)]
        expected = [V(F0, one, zero), V(F0, x, y),
                    V(F0, x * x + y * y, 2 * x * y)]
        scales = [Scalar.of(2), Scalar.of(1), Scalar.of(Fraction(1, 2))]
        for g, e, s in zip(got, expected, scales):
            assert g == e.scale(s)

    def test_inverse_by_elimination_round_trip(self):
        f = BirationalMap(P2, P2, y / (x + 1), y / (x - 1))
        fi = f.inverse()
        comp = f.compose(fi)
        assert comp.f1 == x and comp.f2 == y
        Y = V(P2, x + 1, one)
        assert pullback(pullback(Y, f), fi) == Y

    def test_pushforward_is_inverse_pullback(self):
        f = BirationalMap(F0, F0, x + 1, y * 2, inverse=(x - 1, y / 2))
        Y = V(F0, x, y)
        assert pushforward(pullback(Y, f), f) == Y

    def test_not_birational(self):
        f = BirationalMap(F0, F0, x * x, y)
        with pytest.raises(NotBirational):
            f.inverse()


class TestWedge:
    def test_examples(self):
        assert wedge_collinear(V(F0, zero, one), V(F0, zero, x)) is True
        assert wedge_collinear(V(F0, one, zero), V(F0, zero, one)) is False
        assert wedge_collinear(V(F0, zero, y), V(F0, zero, y * y)) is True


class TestPolar:
    def test_example_1_polar(self):
        X0 = V(P2, (x * x - 1) * (y + 2) / (2 * y), y / 2 + 2 * x + x * y / 2)
        D = polar_divisor(X0)
        assert len(D) == 1
        comp, mult = D.components[0]
        assert str(comp) == "y" and mult == 1

    def test_holomorphic_empty(self):
        assert polar_divisor(V(F0, one, one)).is_empty()

    def test_read_off_denominator(self):
        D = polar_divisor(V(F0, zero, 1 / x))
        assert len(D) == 1 and str(D.components[0][0]) == "x"

    def test_multiplicities(self):
        D = polar_divisor(V(F0, 1 / (x * x), 1 / (y * (x - 1))))
        comps = {str(p): m for p, m in D}
        assert comps == {"x": 2, "y": 1, "x-1": 1}


class TestTangency:
    def test_example_1_true(self):
        X0 = V(P2, (x * x - 1) * (y + 2) / (2 * y), y / 2 + 2 * x + x * y / 2)
        assert polar_tangency_check(X0) is True

    def test_vertical_pole_of_vertical_field(self):
        assert polar_tangency_check(V(F0, zero, 1 / x)) is True

    def test_horizontal_pole_of_vertical_field(self):
        assert polar_tangency_check(V(F0, zero, 1 / y)) is False


class TestFirstIntegral:
    def test_ghys_rebelo(self):
        X = V(P2, x * x, -y * (x - 2 * y))
        assert first_integral_check(X, x * x * y / (x - y)) is True

    def test_hgamma_rational(self):
        # x d/dx + (p/q) y d/dy annihilates x^p / y^q
        p_, q_ = 3, 2
        X = V(F0, x, y * Scalar.of(Fraction(p_, q_)))
        F = x ** p_ / y ** q_
        assert first_integral_check(X, F) is True

    def test_negative(self):
        assert first_integral_check(V(F0, zero, one), y) is False

    def test_constant_rejected(self):
        with pytest.raises(ConstantIntegral):
            first_integral_check(V(F0, zero, one), BiRat.of(3))

    def test_factored_form(self):
        from birfields.bipoly import BiPoly
        X = V(P2, x * x, -y * (x - 2 * y))
        factored = [(BiPoly.x(), 2), (BiPoly.y(), 1), (BiPoly.x() - BiPoly.y(), -1)]
        assert first_integral_check(X, None, factored=factored) is True


class TestMembership:
    def test_y2dy_depends_on_n(self):
        assert membership(V(SurfaceModel.fn(1), zero, y * y), "AutFn")[0] is False
        ok, coeffs = membership(V(F0, zero, y * y), "AutFn")
        assert ok

    def test_borel_coefficients(self):
        ok, coeffs = membership(V(SurfaceModel.fn(2), zero, x), "BorelBn")
        assert ok
        assert [str(c) for c in coeffs] == ["0", "0", "0", "1", "0", "0"]

    def test_reconstruction(self, rng):
        from birfields.fields import autfn_basis, field_in_span
        basis = autfn_basis(2)
        coeffs = [Scalar.of(rng.randint(-3, 3)) for _ in basis]
        X = basis[0].scale(coeffs[0])
        for B, c in zip(basis[1:], coeffs[1:]):
            X = X + B.scale(c)
        ok, got = field_in_span(basis, X)
        assert ok and got == coeffs

    def test_autp2_dimensions(self):
        from birfields.fields import autp2_basis, autfn_basis
        assert len(autp2_basis()) == 8
        assert len(autfn_basis(0)) == 6
        for n in range(1, 5):
            assert len(autfn_basis(n)) == n + 5
