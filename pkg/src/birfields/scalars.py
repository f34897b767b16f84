"""Exact constants: Gaussian rationals Q(i), optionally extended by one square root.

A Scalar is a + b*sqrt(d) where a, b are Gaussian rationals and d is a fixed
Gaussian rational attached to a FieldContext.  Plain Q(i) scalars carry d=None
and mix freely with any context; mixing two different square roots raises
ExtensionAlreadyActive.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple, Union

from .errors import DivisionByZero, ExtensionAlreadyActive

RatLike = Union[int, Fraction]


_F0 = Fraction(0)
_F1 = Fraction(1)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if v == 0:
        return _F0
    if v == 1:
        return _F1
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot build an exact rational from {v!r}")


def _rat_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(n: int) -> Optional[int]:
    if n < 0:
        return None
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


class FieldContext:
    """Declares the active quadratic extension: either none or one sqrt(d)."""

    __slots__ = ("d",)

    def __init__(self, d: Optional[Tuple[Fraction, Fraction]] = None):
        self.d = d  # (re, im) of the Gaussian rational under the root

    def __repr__(self):
        if self.d is None:
            return "FieldContext(Q(i))"
        return f"FieldContext(Q(i)(sqrt({self.d[0]}+{self.d[1]}i)))"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self.d == other.d

    def sqrt_gen(self) -> "Scalar":
        if self.d is None:
            raise ValueError("context has no quadratic extension")
        return Scalar(Fraction(0), Fraction(0), Fraction(1), Fraction(0), self.d)


PLAIN_CONTEXT = FieldContext(None)


class Scalar:
    """Element of Q(i) or Q(i)(sqrt(d)); immutable and exactly comparable."""

    __slots__ = ("re", "im", "sre", "sim", "d", "_hash")

    def __init__(self, re=0, im=0, sre=0, sim=0, d=None):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))
        object.__setattr__(self, "sre", _frac(sre))
        object.__setattr__(self, "sim", _frac(sim))
        if (self.sre or self.sim) and d is None:
            raise ValueError("sqrt coefficients need an extension generator d")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _mk(cls, re, im, sre, sim, d):
        out = object.__new__(cls)
        object.__setattr__(out, "re", re)
        object.__setattr__(out, "im", im)
        object.__setattr__(out, "sre", sre)
        object.__setattr__(out, "sim", sim)
        object.__setattr__(out, "d", d)
        object.__setattr__(out, "_hash", None)
        return out

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def of(v) -> "Scalar":
        if isinstance(v, Scalar):
            return v
        return Scalar(_frac(v))

    @staticmethod
    def i() -> "Scalar":
        return Scalar(0, 1)

    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    # -- bookkeeping -----------------------------------------------------------

    def _join_d(self, other: "Scalar"):
        if self.d is None:
            return other.d
        if other.d is None:
            return self.d
        if self.d != other.d:
            raise ExtensionAlreadyActive(
                f"cannot mix sqrt({self.d}) with sqrt({other.d})"
            )
        return self.d

    def is_zero(self) -> bool:
        return not (self.re or self.im or self.sre or self.sim)

    def is_one(self) -> bool:
        return self.re == 1 and not (self.im or self.sre or self.sim)

    def is_rational(self) -> bool:
        return not (self.im or self.sre or self.sim)

    def is_gaussian(self) -> bool:
        return not (self.sre or self.sim)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a plain rational")
        return self.re

    def as_int(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return f.numerator

    def sort_key(self):
        return (self.re, self.im, self.sre, self.sim)

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.of(other)
        d = self._join_d(other)
        if not (self.im or self.sre or self.sim
                or other.im or other.sre or other.sim):
            return Scalar._mk(self.re + other.re, _F0, _F0, _F0, d)
        return Scalar._mk(self.re + other.re, self.im + other.im,
                          self.sre + other.sre, self.sim + other.sim, d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._mk(-self.re, -self.im, -self.sre, -self.sim, self.d)

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.of(other)
        d = self._join_d(other)
        a_re, a_im, b_re, b_im = self.re, self.im, self.sre, self.sim
        c_re, c_im, e_re, e_im = other.re, other.im, other.sre, other.sim
        if not (a_im or b_re or b_im or c_im or e_re or e_im):
            # plain rational × plain rational dominates in practice
            return Scalar._mk(a_re * c_re, _F0, _F0, _F0, d)
        # (a + b√d)(c + e√d) = (ac + be·d) + (ae + bc)√d over Q(i)
        ac_re = a_re * c_re - a_im * c_im
        ac_im = a_re * c_im + a_im * c_re
        be_re = b_re * e_re - b_im * e_im
        be_im = b_re * e_im + b_im * e_re
        if d is not None and (be_re or be_im):
            d_re, d_im = d
            bed_re = be_re * d_re - be_im * d_im
            bed_im = be_re * d_im + be_im * d_re
        else:
            bed_re = bed_im = Fraction(0)
        ae_re = a_re * e_re - a_im * e_im
        ae_im = a_re * e_im + a_im * e_re
        bc_re = b_re * c_re - b_im * c_im
        bc_im = b_re * c_im + b_im * c_re
        return Scalar._mk(ac_re + bed_re, ac_im + bed_im,
                          ae_re + bc_re, ae_im + bc_im, d)

    __rmul__ = __mul__

    def conj_sqrt(self) -> "Scalar":
        """Conjugate over the quadratic extension: sqrt(d) -> -sqrt(d)."""
        return Scalar(self.re, self.im, -self.sre, -self.sim, self.d)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("scalar division by zero")
        if self.is_gaussian():
            n = self.re * self.re + self.im * self.im
            return Scalar(self.re / n, -self.im / n, 0, 0, self.d)
        # 1/(a + b√d) = (a - b√d)/(a² - b²d), the norm lies in Q(i)
        conj = self.conj_sqrt()
        norm = self * conj  # Gaussian by construction
        assert norm.is_gaussian()
        return conj * Scalar(norm.re, norm.im).inverse()

    def __truediv__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.of(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.of(other)
        return (self.re == other.re and self.im == other.im
                and self.sre == other.sre and self.sim == other.sim)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.re, self.im, self.sre, self.sim))
            object.__setattr__(self, "_hash", h)
        return h

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- printing ---------------------------------------------------------------

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        parts = []
        if self.re or not (self.im or self.sre or self.sim):
            parts.append(str(self.re))
        if self.im:
            parts.append(_coeff_str(self.im, "i"))
        if self.sre or self.sim:
            d_re, d_im = self.d
            dtxt = _gauss_str(d_re, d_im)
            if self.sre:
                parts.append(_coeff_str(self.sre, f"sqrt({dtxt})"))
            if self.sim:
                parts.append(_coeff_str(self.sim, f"i*sqrt({dtxt})"))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def _gauss_str(re: Fraction, im: Fraction) -> str:
    if not im:
        return str(re)
    if not re:
        return _coeff_str(im, "i")
    t = _coeff_str(im, "i")
    return f"{re}{t if t.startswith('-') else '+' + t}"


def _coeff_str(c: Fraction, sym: str) -> str:
    if c == 1:
        return sym
    if c == -1:
        return f"-{sym}"
    return f"{c}*{sym}"


_ZERO = Scalar(0)
_ONE = Scalar(1)


def gaussian_sqrt(z: Scalar) -> Optional[Scalar]:
    """Square root of a Gaussian rational within Q(i), or None."""
    if not z.is_gaussian():
        raise ValueError("gaussian_sqrt expects a Gaussian rational")
    p, q = z.re, z.im
    if q == 0:
        r = _rat_sqrt(p)
        if r is not None:
            return Scalar(r)
        r = _rat_sqrt(-p)
        if r is not None:
            return Scalar(0, r)
        return None
    n = _rat_sqrt(p * p + q * q)
    if n is None:
        return None
    u = _rat_sqrt((p + n) / 2)
    if u is None or u == 0:
        return None
    v = q / (2 * u)
    return Scalar(u, v)


def sqrt_in_context(z: Scalar, ctx: FieldContext) -> Optional[Scalar]:
    """Square root of z inside the field declared by ctx, or None."""
    if z.is_gaussian():
        r = gaussian_sqrt(z)
        if r is not None:
            return r
        if ctx.d is not None:
            # maybe z = w²·d, i.e. sqrt(z) = w·sqrt(d)
            dz = Scalar(ctx.d[0], ctx.d[1])
            w = gaussian_sqrt(z / dz)
            if w is not None:
                return w * ctx.sqrt_gen()
        return None
    if ctx.d is None or z.d != ctx.d:
        return None
    # z = a + b√d with b ≠ 0: (u+v√d)² = z needs u² + v²d = a, 2uv = b
    a = Scalar(z.re, z.im)
    b = Scalar(z.sre, z.sim)
    dz = Scalar(ctx.d[0], ctx.d[1])
    disc = gaussian_sqrt(a * a - b * b * dz)
    if disc is None:
        return None
    for sign in (1, -1):
        u2 = (a + disc * sign) / 2
        u = gaussian_sqrt(u2)
        if u is not None and not u.is_zero():
            v = b / (u * 2)
            cand = u + v * ctx.sqrt_gen()
            if cand * cand == z:
                return cand
    return None


def extend_by_sqrt(d, ctx: FieldContext = PLAIN_CONTEXT):
    """Adjoin sqrt(d) to the constant field.

    Returns (context, already_square): if d is already a square in the current
    field the context is returned unchanged with the flag set.  Asking for a
    second distinct extension raises ExtensionAlreadyActive.
    """
    d = Scalar.of(d)
    if not d.is_gaussian():
        raise ValueError("the extension generator must be a Gaussian rational")
    if d.is_zero():
        raise ValueError("cannot extend by sqrt(0)")
    if sqrt_in_context(d, ctx) is not None:
        return ctx, True
    key = (d.re, d.im)
    if ctx.d is not None and ctx.d != key:
        raise ExtensionAlreadyActive(
            f"extension sqrt({_gauss_str(*ctx.d)}) already active"
        )
    return FieldContext(key), False
