"""Chart-tagged rational surfaces: the projective plane and Hirzebruch surfaces.

All computation happens in the standard affine chart (x, y).  For Fn, x is an
affine coordinate on the base and y one on the fiber, with {y = infinity} the
section of self-intersection -n.  F0 is P1 x P1.
"""

from __future__ import annotations


class SurfaceModel:
    __slots__ = ("kind", "n")

    def __init__(self, kind: str, n: int | None = None):
        if kind == "P2":
            if n is not None:
                raise ValueError("P2 carries no parameter")
        elif kind == "Fn":
            if n is None or n < 0:
                raise ValueError("Fn needs an integer n >= 0")
        else:
            raise ValueError(f"unknown surface kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("SurfaceModel is immutable")

    @staticmethod
    def p2() -> "SurfaceModel":
        return P2

    @staticmethod
    def fn(n: int) -> "SurfaceModel":
        return SurfaceModel("Fn", n)

    def is_p2(self) -> bool:
        return self.kind == "P2"

    def is_fn(self) -> bool:
        return self.kind == "Fn"

    def __eq__(self, other):
        return (isinstance(other, SurfaceModel)
                and self.kind == other.kind and self.n == other.n)

    def __hash__(self):
        return hash((self.kind, self.n))

    def __repr__(self):
        return "P2" if self.is_p2() else f"F{self.n}"


P2 = SurfaceModel("P2")
F0 = SurfaceModel("Fn", 0)
