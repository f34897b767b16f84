import random

import pytest

from birfields import BiRat, Scalar, SurfaceModel, VectorField
from birfields.surfaces import F0, P2


@pytest.fixture
def rng():
    return random.Random(20240817)


def rand_rational(rng, bound=4):
    from fractions import Fraction
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def rand_scalar(rng, bound=4, gaussian=True):
    from fractions import Fraction
    re = rand_rational(rng, bound)
    im = rand_rational(rng, 1) if gaussian and rng.random() < 0.3 else Fraction(0)
    return Scalar(re, im)


def rand_bipoly(rng, deg=3, terms=4):
    from birfields.bipoly import BiPoly
    d = {}
    for _ in range(terms):
        i = rng.randint(0, deg)
        j = rng.randint(0, deg - i)
        d[(i, j)] = rand_scalar(rng)
    return BiPoly(d)


def rand_poly_field(rng, surface=F0, deg=3):
    px = BiRat(rand_bipoly(rng, deg))
    py = BiRat(rand_bipoly(rng, deg))
    return VectorField(surface, px, py)


def rand_unipoly(rng, deg=3):
    from birfields.unipoly import UniPoly
    return UniPoly([rand_scalar(rng) for _ in range(rng.randint(1, deg + 1))])
