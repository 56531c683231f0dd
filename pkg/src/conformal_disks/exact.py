"""Exact scalar arithmetic helpers.

Rational arithmetic is plain `fractions.Fraction`; the complexified work in
dimension two additionally needs Gaussian rationals (a + b*i with rational
a, b), implemented here as a small immutable value type.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        # Exact binary value of the float, not a decimal approximation.
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_value(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
        return GaussianRational(_as_fraction(x))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = GaussianRational.from_value(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.from_value(other))

    def __rsub__(self, other):
        return GaussianRational.from_value(other) + (-self)

    def __mul__(self, other):
        o = GaussianRational.from_value(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.from_value(other)
        n2 = o.re * o.re + o.im * o.im
        if n2 == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return self * GaussianRational(o.re / n2, -o.im / n2)

    def __rtruediv__(self, other):
        return GaussianRational.from_value(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- predicates / conversions ---------------------------------------
    def __eq__(self, other):
        try:
            o = GaussianRational.from_value(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


def gamma_half(twice: int) -> tuple[Fraction, int]:
    """Gamma(twice/2) as (rational, e) meaning rational * pi**(e/2).

    `twice` must be a positive integer.  For even arguments the result is a
    plain factorial; for odd arguments a factor sqrt(pi) appears, reported
    through e = 1.
    """
    if twice <= 0:
        raise ValueError("gamma_half needs a positive argument")
    if twice % 2 == 0:
        return Fraction(factorial(twice // 2 - 1)), 0
    # Gamma(k + 1/2) = (2k)! / (4^k k!) * sqrt(pi)
    k = (twice - 1) // 2
    return Fraction(factorial(2 * k), 4**k * factorial(k)), 1
