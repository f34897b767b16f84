import pytest

from birfields.bipoly import BiRat
from birfields.errors import DegreeOverflow, ExprSyntaxError
from birfields.fields import VectorField
from birfields.parse import (parse_expr, parse_field, parse_map, print_field,
                             print_map)
from birfields.scalars import Scalar, extend_by_sqrt
from birfields.surfaces import F0, P2

x, y = BiRat.x(), BiRat.y()


def test_example_1_field_text():
    X = parse_field("(x^2-1)*(y+2)/(2*y) d/dx + (y/2+2*x+x*y/2) d/dy", P2)
    assert X == VectorField(P2, (x * x - 1) * (y + 2) / (2 * y),
                            y / 2 + 2 * x + x * y / 2)


def test_simple_vertical():
    assert parse_field("y^2 d/dy", F0) == VectorField(F0, BiRat.zero(), y * y)


def test_unknown_variable():
    with pytest.raises(ExprSyntaxError):
        parse_field("d/dz", F0)


def test_components_in_any_order():
    a = parse_field("y d/dy + x d/dx", F0)
    b = parse_field("x d/dx + y d/dy", F0)
    assert a == b


def test_minus_between_components():
    X = parse_field("x d/dx - y d/dy", F0)
    assert X == VectorField(F0, x, -y)


def test_bare_derivation_token():
    assert parse_field("d/dy", F0) == VectorField(F0, BiRat.zero(), BiRat.one())


def test_imaginary_unit_and_negative_powers():
    v = parse_expr("i*x^-2")
    assert v == BiRat.of(Scalar.i()) / (x * x)


def test_degree_overflow():
    with pytest.raises(DegreeOverflow):
        parse_expr("x^65")
    parse_expr("x^64")


def test_error_carries_position():
    with pytest.raises(ExprSyntaxError) as ei:
        parse_expr("x + @")
    assert ei.value.position == 4


def test_print_parse_round_trip_fields():
    texts = [
        "(x^2-1)*(y+2)/(2*y) d/dx + (y/2+2*x+x*y/2) d/dy",
        "y^2 d/dy",
        "x d/dx - y d/dy",
        "(1/2+3/4*i) d/dy",
        "-3*x*y d/dx + (x^2+y^2-1)/(x-y) d/dy",
    ]
    for t in texts:
        X = parse_field(t, F0)
        assert parse_field(print_field(X), F0) == X


def test_round_trip_under_extension():
    ctx, _ = extend_by_sqrt(2)
    s = ctx.sqrt_gen() + Scalar.of(1)
    X = VectorField(F0, BiRat.zero(), BiRat.of(s) * y)
    assert parse_field(print_field(X), F0, ctx) == X


def test_sqrt_token_requires_context():
    with pytest.raises(ExprSyntaxError):
        parse_expr("sqrt(2)")
    ctx, _ = extend_by_sqrt(2)
    v = parse_expr("sqrt(2)", ctx)
    assert v.constant() * v.constant() == Scalar.of(2)


def test_map_round_trip():
    m = parse_map("(y/(x+1), y/(x-1))", P2, P2)
    m2 = parse_map(print_map(m), P2, P2)
    assert m.f1 == m2.f1 and m.f2 == m2.f2


def test_catalog_print_parse_round_trip():
    from birfields.catalog import builtin_catalog
    for name in ["g0", "gn(2)", "g2tilde", "g4tilde", "AutP2", "AutF0", "Bn(2)"]:
        pres = builtin_catalog(name)
        for X in pres.basis:
            assert parse_field(print_field(X), X.surface) == X
