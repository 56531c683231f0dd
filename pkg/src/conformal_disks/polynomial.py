"""Exact multivariate polynomials over the rationals (optionally complexified).

Coefficients are `fractions.Fraction` or `GaussianRational`; multi-indices are
tuples of non-negative integers of length equal to the ambient dimension.
The Laplacian used throughout the package is the geometer's non-negative one,
``-sum_i d^2/dx_i^2``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from .exact import GaussianRational

Monomial = tuple

def _coerce(c):
    if isinstance(c, (Fraction, GaussianRational)):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, complex):
        return GaussianRational.from_value(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Polynomial:
    """Sparse exact polynomial; immutable after construction."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs=None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        for alpha, c in (coeffs or {}).items():
            c = _coerce(c)
            if c == 0:
                continue
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha} for dimension {dim}")
            clean[alpha] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(dim: int) -> "Polynomial":
        return Polynomial(dim, {})

    @staticmethod
    def one(dim: int) -> "Polynomial":
        return Polynomial(dim, {(0,) * dim: Fraction(1)})

    @staticmethod
    def monomial(dim: int, alpha, c=1) -> "Polynomial":
        return Polynomial(dim, {tuple(alpha): c})

    @staticmethod
    def variable(dim: int, i: int) -> "Polynomial":
        alpha = [0] * dim
        alpha[i] = 1
        return Polynomial(dim, {tuple(alpha): Fraction(1)})

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(sum(a) for a in self.coeffs)

    def is_homogeneous(self) -> bool:
        degs = {sum(a) for a in self.coeffs}
        return len(degs) <= 1

    def homogeneous_parts(self) -> dict:
        parts: dict[int, dict] = {}
        for alpha, c in self.coeffs.items():
            parts.setdefault(sum(alpha), {})[alpha] = c
        return {n: Polynomial(self.dim, d) for n, d in sorted(parts.items())}

    def is_real(self) -> bool:
        return all(
            not isinstance(c, GaussianRational) or c.is_real
            for c in self.coeffs.values()
        )

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for alpha, c in other.coeffs.items():
            out[alpha] = out.get(alpha, 0) + c
        return Polynomial(self.dim, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dim, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = _coerce(c)
        if c == 0:
            return Polynomial.zero(self.dim)
        return Polynomial(self.dim, {a: v * c for a, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out: dict = {}
        for a1, c1 in self.coeffs.items():
            for a2, c2 in other.coeffs.items():
                key = tuple(i + j for i, j in zip(a1, a2))
                out[key] = out.get(key, 0) + c1 * c2
        return Polynomial(self.dim, out)

    def __rmul__(self, other):
        return self.scale(other)

    def conjugate(self) -> "Polynomial":
        return Polynomial(
            self.dim,
            {
                a: c.conjugate() if isinstance(c, GaussianRational) else c
                for a, c in self.coeffs.items()
            },
        )

    # -- calculus ---------------------------------------------------------
    def diff(self, i: int) -> "Polynomial":
        out = {}
        for alpha, c in self.coeffs.items():
            if alpha[i] == 0:
                continue
            beta = list(alpha)
            beta[i] -= 1
            out[tuple(beta)] = out.get(tuple(beta), 0) + c * alpha[i]
        return Polynomial(self.dim, out)

    def diff_alpha(self, alpha) -> "Polynomial":
        p = self
        for i, k in enumerate(alpha):
            for _ in range(k):
                p = p.diff(i)
        return p

    def laplacian(self) -> "Polynomial":
        """Non-negative Laplacian -sum_i d^2/dx_i^2."""
        out = Polynomial.zero(self.dim)
        for i in range(self.dim):
            out = out - self.diff(i).diff(i)
        return out

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, point):
        """Evaluate at `point` (length-dim sequence).

        Exact when coordinates and coefficients are rational; float/complex
        coordinates switch to floating arithmetic.
        """
        coords = list(point)
        if len(coords) != self.dim:
            raise ValueError("point has wrong dimension")
        inexact = any(isinstance(x, (float, complex)) for x in coords)
        total = None
        for alpha, c in self.coeffs.items():
            term = 1
            for x, a in zip(coords, alpha):
                if a:
                    term = term * x**a
            if inexact:
                cval = complex(c) if isinstance(c, GaussianRational) else float(c)
                if cval.imag == 0 and not isinstance(term, complex):
                    cval = cval.real
                term = cval * term
            else:
                term = c * term
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if not inexact else 0.0
        return total

    # -- normal forms ---------------------------------------------------------
    def primitive(self) -> "Polynomial":
        """Rescale a real polynomial to coprime integer coefficients.

        Sign convention: the leading coefficient (graded-lex largest monomial)
        is positive.  Only direction matters to the callers.
        """
        if not self.coeffs:
            return self
        if not self.is_real():
            raise ValueError("primitive() expects real coefficients")
        fracs = {
            a: (c if isinstance(c, Fraction) else c.re)
            for a, c in self.coeffs.items()
        }
        den = 1
        for c in fracs.values():
            den = den * c.denominator // gcd(den, c.denominator)
        ints = {a: c.numerator * (den // c.denominator) for a, c in fracs.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, abs(v))
        lead = max(ints)
        sign = -1 if ints[lead] < 0 else 1
        return Polynomial(self.dim, {a: Fraction(sign * v, g) for a, v in ints.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.dim == other.dim
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        bits = []
        for alpha in sorted(self.coeffs, key=lambda a: (sum(a), a), reverse=True):
            c = self.coeffs[alpha]
            mono = "*".join(
                f"x{i + 1}^{a}" if a > 1 else f"x{i + 1}"
                for i, a in enumerate(alpha)
                if a
            )
            bits.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def monomials(dim: int, degree: int) -> list:
    """All degree-`degree` multi-indices, graded-lex (lexicographically
    descending within the fixed degree)."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, slots - 1)

    rec((), degree, dim)
    return out


@lru_cache(maxsize=None)
def radial_power(dim: int, k: int) -> Polynomial:
    """|x|^(2k) as an exact polynomial."""
    if k == 0:
        return Polynomial.one(dim)
    r2 = Polynomial(
        dim,
        {
            tuple(2 if j == i else 0 for j in range(dim)): Fraction(1)
            for i in range(dim)
        },
    )
    return radial_power(dim, k - 1) * r2
