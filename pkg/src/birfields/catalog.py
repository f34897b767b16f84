"""Built-in algebra presentations: concrete field bases on the surfaces and
abstract root-data tensors for the rank-2 Borel fingerprints."""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .bipoly import BiRat
from .errors import UnknownName
from .fields import VectorField, autfn_basis, autp2_basis, borel_basis
from .lie import AlgebraPresentation, structure_constants
from .scalars import Scalar
from .surfaces import F0, P2, SurfaceModel

S0 = Scalar.zero()
S1 = Scalar.one()


def g0_basis(surface: SurfaceModel = F0) -> List[VectorField]:
    y = BiRat.y()
    return [
        VectorField.vertical(surface, BiRat.one()),
        VectorField.vertical(surface, y),
        VectorField.vertical(surface, y * y),
    ]


def gn_basis(n: int, surface: Optional[SurfaceModel] = None) -> List[VectorField]:
    from fractions import Fraction
    if surface is None:
        surface = SurfaceModel.fn(n)
    x, y = BiRat.x(), BiRat.y()
    return [
        VectorField(surface, BiRat.one(), BiRat.zero()),
        VectorField(surface, x, y * Scalar.of(Fraction(n, 2))),
        VectorField(surface, x * x, x * y * Scalar.of(n)),
    ]


def g2tilde_basis(surface: SurfaceModel = F0) -> List[VectorField]:
    x, y = BiRat.x(), BiRat.y()
    return [
        VectorField(surface, BiRat.one(), BiRat.one()),
        VectorField(surface, x, y),
        VectorField(surface, x * x, y * y),
    ]


def g4tilde_basis(surface: SurfaceModel = P2) -> List[VectorField]:
    x, y = BiRat.x(), BiRat.y()
    return [
        VectorField(surface, x * x + 1, x * y),
        VectorField(surface, x * y, y * y + 1),
        VectorField(surface, y, -x),
    ]


def _abstract(dim: int, names: List[str],
              brackets: Dict[Tuple[str, str], Dict[str, Scalar]]) -> AlgebraPresentation:
    idx = {nm: k for k, nm in enumerate(names)}
    c = [[[S0] * dim for _ in range(dim)] for _ in range(dim)]
    for (a, b), rhs in brackets.items():
        i, j = idx[a], idx[b]
        for nm, coeff in rhs.items():
            k = idx[nm]
            c[i][j][k] = c[i][j][k] + coeff
            c[j][i][k] = c[j][i][k] - coeff
    return AlgebraPresentation(dim=dim, constants=c).validate()


def _root_borel(roots: List[Tuple[int, int]],
                nil_brackets: Dict[Tuple[Tuple[int, int], Tuple[int, int]],
                                   Tuple[Tuple[int, int], int]]) -> AlgebraPresentation:
    """Borel from root data: Cartan (h1, h2) acting diagonally by the root
    coordinates, plus fixed constants on the positive nilradical."""
    names = ["h1", "h2"] + [f"v{i}{j}" for i, j in roots]
    brackets: Dict[Tuple[str, str], Dict[str, Scalar]] = {}
    for (i, j) in roots:
        v = f"v{i}{j}"
        if i:
            brackets[("h1", v)] = {v: Scalar.of(i)}
        if j:
            brackets[("h2", v)] = {v: Scalar.of(j)}
    for ((r1, r2), (target, coeff)) in nil_brackets.items():
        a = f"v{r1[0]}{r1[1]}"
        b = f"v{r2[0]}{r2[1]}"
        t = f"v{target[0]}{target[1]}"
        brackets[(a, b)] = {t: Scalar.of(coeff)}
    return _abstract(len(names), names, brackets)


def borel_a2() -> AlgebraPresentation:
    roots = [(1, 0), (0, 1), (1, 1)]
    nil = {((1, 0), (0, 1)): ((1, 1), 1)}
    pres = _root_borel(roots, nil)
    pres.name = "BorelA2"
    return pres


def borel_b2() -> AlgebraPresentation:
    roots = [(1, 0), (0, 1), (1, 1), (2, 1)]
    nil = {
        ((1, 0), (0, 1)): ((1, 1), 1),
        ((1, 0), (1, 1)): ((2, 1), 1),
    }
    pres = _root_borel(roots, nil)
    pres.name = "BorelB2"
    return pres


def borel_g2() -> AlgebraPresentation:
    roots = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]
    # standard Chevalley constants for the positive roots of G2; signs chosen
    # so Jacobi closes (validated at load)
    nil = {
        ((1, 0), (0, 1)): ((1, 1), 1),
        ((1, 0), (1, 1)): ((2, 1), 2),
        ((1, 0), (2, 1)): ((3, 1), 3),
        ((0, 1), (3, 1)): ((3, 2), -1),
        ((1, 1), (2, 1)): ((3, 2), 3),
    }
    pres = _root_borel(roots, nil)
    pres.name = "BorelG2"
    return pres


def a1_x_a1() -> AlgebraPresentation:
    names = ["h1", "v1", "w1", "h2", "v2", "w2"]
    two = Scalar.of(2)
    brackets = {
        ("h1", "v1"): {"v1": S1},
        ("h1", "w1"): {"w1": -S1},
        ("v1", "w1"): {"h1": two},
        ("h2", "v2"): {"v2": S1},
        ("h2", "w2"): {"w2": -S1},
        ("v2", "w2"): {"h2": two},
    }
    pres = _abstract(6, names, brackets)
    pres.name = "A1xA1"
    return pres


def builtin_catalog(name: str, n: Optional[int] = None) -> AlgebraPresentation:
    """Catalog presentations by name; concrete surface bases get their tensor
    computed (and thereby verified) on construction."""
    key = name.strip()
    if key.startswith("Bn"):
        if n is None:
            n = _paren_arg(key)
        pres = structure_constants(borel_basis(n))
        pres.name = f"Bn({n})"
        return pres
    if key.startswith("AutFn"):
        if n is None:
            n = _paren_arg(key)
        pres = structure_constants(autfn_basis(n))
        pres.name = f"AutFn({n})"
        return pres
    if key == "AutP2":
        pres = structure_constants(autp2_basis())
        pres.name = "AutP2"
        return pres
    if key == "AutF0":
        pres = structure_constants(autfn_basis(0))
        pres.name = "AutF0"
        return pres
    if key == "g0":
        pres = structure_constants(g0_basis())
        pres.name = "g0"
        return pres
    if key.startswith("gn"):
        if n is None:
            n = _paren_arg(key)
        pres = structure_constants(gn_basis(n))
        pres.name = f"gn({n})"
        return pres
    if key == "g2tilde":
        pres = structure_constants(g2tilde_basis())
        pres.name = "g2tilde"
        return pres
    if key == "g4tilde":
        pres = structure_constants(g4tilde_basis())
        pres.name = "g4tilde"
        return pres
    if key == "BorelA2":
        return borel_a2()
    if key == "BorelB2":
        return borel_b2()
    if key == "BorelG2":
        return borel_g2()
    if key == "A1xA1":
        return a1_x_a1()
    raise UnknownName(f"no builtin algebra named {name!r}")


def _paren_arg(key: str) -> int:
    import re
    m = re.search(r"\((\-?\d+)\)", key)
    if not m:
        raise UnknownName(f"{key!r} needs an integer argument, e.g. Bn(2)")
    return int(m.group(1))
