"""Orientation-preserving conformal maps of flat space.

Three interchangeable representations:

* ``Word`` - an ordered list of generators (translation, orthogonal block,
  dilation, special conformal) applied left to right.  Works in every
  dimension d >= 2 and carries an exact chain rule for the conformal factor.
* ``Mobius`` - a 2x2 complex matrix acting on z by (az+b)/(cz+d); the d = 2
  image of a generator word.
* ``HolomorphicSeries`` - a truncated Taylor series around 0 with declared
  validity radius, for d = 2 maps that are not fractional linear.

``compose(phi, psi)`` always means "apply psi first": apply(compose(phi,
psi), x) == apply(phi, apply(psi, x)).
"""
from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .config import BOUNDARY_SAMPLES_2D, SPECIAL_CONFORMAL_GUARD
from .errors import DegenerateError, DomainError, RadiusError, UnsupportedError

_ORTHO_TOL = 1e-12
_DERIV_FLOOR = 1e-14


def _point(x, d: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError("a point is a flat coordinate sequence")
    if d is not None and v.shape[0] != d:
        raise ValueError("point dimension mismatch")
    return v


def _to_complex(x) -> complex:
    if isinstance(x, complex):
        return x
    if isinstance(x, (int, float)):
        return complex(x)
    v = _point(x, 2)
    return complex(v[0], v[1])


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


class Translation:
    __slots__ = ("a",)

    def __init__(self, a):
        self.a = _point(a)
        self.a.flags.writeable = False

    def apply(self, x: np.ndarray) -> np.ndarray:
        return x + self.a

    def omega(self, x: np.ndarray) -> float:
        return 1.0

    def inverse(self) -> "Translation":
        return Translation(-self.a)

    is_affine = True

    def record(self) -> dict:
        return {"kind": "translation", "a": [float(v) for v in self.a]}

    def __repr__(self):
        return f"Translation({list(self.a)})"


class Orthogonal:
    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("orthogonal block must be a square matrix")
        if np.abs(m.T @ m - np.eye(m.shape[0])).max() > _ORTHO_TOL:
            raise ValueError("matrix is not orthogonal to 1e-12")
        if np.linalg.det(m) <= 0:
            raise ValueError("orientation-reversing block rejected")
        self.matrix = m
        self.matrix.flags.writeable = False

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def omega(self, x: np.ndarray) -> float:
        return 1.0

    def inverse(self) -> "Orthogonal":
        return Orthogonal(self.matrix.T)

    is_affine = True

    def record(self) -> dict:
        return {"kind": "orthogonal", "matrix": [[float(v) for v in row] for row in self.matrix]}

    def __repr__(self):
        return f"Orthogonal({self.matrix.tolist()})"


class Dilation:
    __slots__ = ("factor",)

    def __init__(self, factor: float):
        r = float(factor)
        if not r > 0:
            raise ValueError("dilation factor must be positive")
        self.factor = r

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.factor * x

    def omega(self, x: np.ndarray) -> float:
        return self.factor

    def inverse(self) -> "Dilation":
        return Dilation(1.0 / self.factor)

    is_affine = True

    def record(self) -> dict:
        return {"kind": "dilation", "R": self.factor}

    def __repr__(self):
        return f"Dilation({self.factor})"


class SpecialConformal:
    __slots__ = ("b",)

    def __init__(self, b):
        self.b = _point(b)
        self.b.flags.writeable = False

    def _denominator(self, x: np.ndarray) -> float:
        b = self.b
        return 1.0 - 2.0 * float(x @ b) + float(x @ x) * float(b @ b)

    def apply(self, x: np.ndarray) -> np.ndarray:
        den = self._denominator(x)
        if abs(den) <= SPECIAL_CONFORMAL_GUARD:
            raise DomainError("special conformal denominator vanished")
        return (x - float(x @ x) * self.b) / den

    def omega(self, x: np.ndarray) -> float:
        den = self._denominator(x)
        if abs(den) <= SPECIAL_CONFORMAL_GUARD:
            raise DomainError("special conformal denominator vanished")
        return 1.0 / den

    def inverse(self) -> "SpecialConformal":
        return SpecialConformal(-self.b)

    is_affine = False

    def record(self) -> dict:
        return {"kind": "special_conformal", "b": [float(v) for v in self.b]}

    def __repr__(self):
        return f"SpecialConformal({list(self.b)})"


_GENERATORS = (Translation, Orthogonal, Dilation, SpecialConformal)


def _generator_dim(g) -> int | None:
    if isinstance(g, Translation):
        return len(g.a)
    if isinstance(g, Orthogonal):
        return g.matrix.shape[0]
    if isinstance(g, SpecialConformal):
        return len(g.b)
    return None  # dilation fits any dimension


# ---------------------------------------------------------------------------
# generator words
# ---------------------------------------------------------------------------


class Word:
    """A conformal map given as a left-to-right pipeline of generators."""

    __slots__ = ("dim", "generators")

    def __init__(self, dim: int, generators=()):
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, _GENERATORS):
                raise TypeError(f"not a generator: {g!r}")
            gd = _generator_dim(g)
            if gd is not None and gd != dim:
                raise ValueError("generator dimension mismatch")
        self.dim = dim
        self.generators = gens

    def apply(self, x) -> np.ndarray:
        v = _point(x, self.dim)
        for g in self.generators:
            v = g.apply(v)
        return v

    def omega(self, x) -> float:
        v = _point(x, self.dim)
        total = 1.0
        for g in self.generators:
            total *= g.omega(v)
            v = g.apply(v)
        return total

    def inverse(self) -> "Word":
        return Word(self.dim, tuple(g.inverse() for g in reversed(self.generators)))

    @property
    def is_affine(self) -> bool:
        return all(g.is_affine for g in self.generators)

    def affine_data(self):
        """(M, t) with word(x) = M x + t, M = scale * rotation.

        Only valid for affine words; raises UnsupportedError otherwise.
        """
        if not self.is_affine:
            raise UnsupportedError("word contains a special conformal block")
        m = np.eye(self.dim)
        t = np.zeros(self.dim)
        for g in self.generators:
            if isinstance(g, Translation):
                t = t + g.a
            elif isinstance(g, Dilation):
                m = g.factor * m
                t = g.factor * t
            else:
                m = g.matrix @ m
                t = g.matrix @ t
        return m, t

    def to_mobius(self) -> "Mobius":
        if self.dim != 2:
            raise UnsupportedError("Mobius form exists only in dimension 2")
        mat = np.eye(2, dtype=complex)
        for g in self.generators:
            if isinstance(g, Translation):
                gm = np.array([[1.0, complex(g.a[0], g.a[1])], [0.0, 1.0]])
            elif isinstance(g, Orthogonal):
                lam = complex(g.matrix[0, 0], g.matrix[1, 0])
                gm = np.array([[lam, 0.0], [0.0, 1.0]])
            elif isinstance(g, Dilation):
                gm = np.array([[complex(g.factor), 0.0], [0.0, 1.0]])
            else:
                w = complex(g.b[0], g.b[1])
                gm = np.array([[1.0, 0.0], [-w.conjugate(), 1.0]])
            mat = gm @ mat
        return Mobius(mat)

    def record(self) -> dict:
        return {"dim": self.dim, "word": [g.record() for g in self.generators]}

    def __repr__(self):
        return f"Word(dim={self.dim}, generators={list(self.generators)})"


def identity_word(dim: int) -> Word:
    return Word(dim, ())


# ---------------------------------------------------------------------------
# Mobius maps (d = 2)
# ---------------------------------------------------------------------------


class Mobius:
    """z -> (az+b)/(cz+d) encoded by the 2x2 complex matrix [[a,b],[c,d]]."""

    __slots__ = ("matrix",)

    dim = 2

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("Mobius matrix must be 2x2")
        if abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) <= _DERIV_FLOOR:
            raise DegenerateError("Mobius matrix is singular")
        self.matrix = m
        self.matrix.flags.writeable = False

    @property
    def det(self) -> complex:
        m = self.matrix
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]

    def evaluate(self, z: complex) -> complex:
        m = self.matrix
        den = m[1, 0] * z + m[1, 1]
        if abs(den) <= _DERIV_FLOOR:
            raise DomainError("Mobius pole hit")
        return (m[0, 0] * z + m[0, 1]) / den

    def derivative(self, z: complex, order: int = 1) -> complex:
        if order == 0:
            return self.evaluate(z)
        m = self.matrix
        den = m[1, 0] * z + m[1, 1]
        if abs(den) <= _DERIV_FLOOR:
            raise DomainError("Mobius pole hit")
        sign = -1.0 if order % 2 == 0 else 1.0
        return (
            self.det
            * sign
            * math.factorial(order)
            * m[1, 0] ** (order - 1)
            / den ** (order + 1)
        )

    def apply(self, x):
        z = self.evaluate(_to_complex(x))
        if isinstance(x, (complex, int, float)):
            return z
        return np.array([z.real, z.imag])

    def omega(self, x) -> float:
        return abs(self.derivative(_to_complex(x), 1))

    def inverse(self) -> "Mobius":
        m = self.matrix
        return Mobius([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])

    def pole(self) -> complex | None:
        m = self.matrix
        if m[1, 0] == 0:
            return None
        return -m[1, 1] / m[1, 0]

    def to_series(self, truncation: int, radius: float = 1.0) -> "HolomorphicSeries":
        m = self.matrix
        a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        coeffs = np.zeros(truncation + 1, dtype=complex)
        if c == 0:
            coeffs[0] = b / d
            coeffs[1] = a / d
        else:
            pole = -d / c
            if abs(pole) <= radius * (1 + 1e-12):
                raise RadiusError("Mobius pole inside the requested disk")
            # (az+b)/(cz+d) = a/c + ((bc-ad)/(cd)) sum_k (-c/d)^k z^k
            ratio = -c / d
            coeffs[0] = a / c + (b * c - a * d) / (c * d)
            head = (b * c - a * d) / (c * d)
            powr = 1.0 + 0.0j
            for k in range(1, truncation + 1):
                powr *= ratio
                coeffs[k] = head * powr
        return HolomorphicSeries(coeffs, radius=radius)

    def record(self) -> dict:
        m = self.matrix
        return {
            "dim": 2,
            "mobius": [[[v.real, v.imag] for v in row] for row in m],
        }

    def __repr__(self):
        return f"Mobius({self.matrix.tolist()})"


def mobius_identity() -> Mobius:
    return Mobius(np.eye(2))


# ---------------------------------------------------------------------------
# truncated holomorphic series (d = 2)
# ---------------------------------------------------------------------------


def _conv_trunc(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    out = np.convolve(a, b)[: n + 1]
    if out.shape[0] < n + 1:
        out = np.pad(out, (0, n + 1 - out.shape[0]))
    return out


def series_compose_coeffs(outer: np.ndarray, inner: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of outer(inner(z)) truncated at degree n (Horner)."""
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = outer[-1]
    for k in range(len(outer) - 2, -1, -1):
        acc = _conv_trunc(acc, inner, n)
        acc[0] += outer[k]
    return acc


def series_reciprocal_coeffs(s: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of 1/s(z) truncated at degree n; s[0] must be nonzero."""
    if abs(s[0]) <= _DERIV_FLOOR:
        raise DegenerateError("series reciprocal needs a nonzero constant term")
    t = np.zeros(n + 1, dtype=complex)
    t[0] = 1.0 / s[0]
    src = np.zeros(n + 1, dtype=complex)
    src[: min(len(s), n + 1)] = s[: n + 1]
    for k in range(1, n + 1):
        t[k] = -np.dot(src[1 : k + 1], t[k - 1 :: -1]) / src[0]
    return t


class HolomorphicSeries:
    """Truncated Taylor series sum c_k z^k around 0, valid on |z| < radius."""

    __slots__ = ("coeffs", "radius", "_injective")

    dim = 2

    def __init__(self, coeffs, radius: float = 1.0, allow_degenerate: bool = False):
        # allow_degenerate admits c_1 = 0 candidates so that the injectivity
        # certifier can reject them; conformal-map operations still guard.
        c = np.asarray(coeffs, dtype=complex).copy()
        if c.ndim != 1 or c.shape[0] < 2:
            raise ValueError("need coefficients c_0..c_N with N >= 1")
        if not allow_degenerate and abs(c[1]) <= _DERIV_FLOOR:
            raise DegenerateError("series must have c_1 != 0")
        r = float(radius)
        if not 0 < r <= 1:
            raise ValueError("validity radius must lie in (0, 1]")
        c.flags.writeable = False
        self.coeffs = c
        self.radius = r
        self._injective: bool | None = None

    @property
    def truncation(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def injectivity_certificate(self) -> bool | None:
        return self._injective

    def evaluate(self, z: complex) -> complex:
        if abs(z) >= self.radius * (1 + 1e-12):
            raise RadiusError("point outside the declared validity radius")
        acc = 0j
        for ck in self.coeffs[::-1]:
            acc = acc * z + ck
        return acc

    def derivative_coeffs(self, order: int = 1) -> np.ndarray:
        c = self.coeffs
        for _ in range(order):
            k = np.arange(1, c.shape[0])
            c = c[1:] * k
            if c.shape[0] == 0:
                return np.zeros(1, dtype=complex)
        return c

    def derivative_at(self, z: complex, order: int = 1) -> complex:
        c = self.derivative_coeffs(order)
        acc = 0j
        for ck in c[::-1]:
            acc = acc * z + ck
        return acc

    def jet(self, z: complex, order: int) -> list:
        """[phi(z), phi'(z), ..., phi^(order)(z)]."""
        return [self.derivative_at(z, k) if k else self.evaluate(z) for k in range(order + 1)]

    def apply(self, x):
        z = self.evaluate(_to_complex(x))
        if isinstance(x, (complex, int, float)):
            return z
        return np.array([z.real, z.imag])

    def omega(self, x) -> float:
        return abs(self.derivative_at(_to_complex(x), 1))

    def boundary_max(self, samples: int = BOUNDARY_SAMPLES_2D) -> float:
        r = self.radius * (1 - 1e-9)
        ang = np.exp(2j * np.pi * np.arange(samples) / samples)
        vals = np.polyval(self.coeffs[::-1], r * ang)
        return float(np.abs(vals).max())

    def with_truncation(self, n: int) -> "HolomorphicSeries":
        c = np.zeros(n + 1, dtype=complex)
        m = min(n + 1, self.coeffs.shape[0])
        c[:m] = self.coeffs[:m]
        return HolomorphicSeries(c, radius=self.radius)

    def record(self) -> dict:
        return {
            "dim": 2,
            "series": [[v.real, v.imag] for v in self.coeffs],
            "radius": self.radius,
        }

    def __repr__(self):
        return (
            f"HolomorphicSeries(N={self.truncation}, radius={self.radius}, "
            f"c1={self.coeffs[1]:.6g})"
        )


def series_identity(truncation: int = 1) -> HolomorphicSeries:
    c = np.zeros(max(truncation, 1) + 1, dtype=complex)
    c[1] = 1.0
    return HolomorphicSeries(c)


def series_inverse_point(phi: HolomorphicSeries, w: complex, z0: complex | None = None) -> complex:
    """Solve phi(z) = w by Newton iteration inside the validity disk."""
    z = 0j if z0 is None else z0
    for _ in range(100):
        dz = (np.polyval(phi.coeffs[::-1], z) - w) / np.polyval(
            phi.derivative_coeffs(1)[::-1], z
        )
        z = z - dz
        if abs(dz) < 1e-15:
            return z
    raise DegenerateError("Newton inversion failed to converge")


# ---------------------------------------------------------------------------
# generic operations
# ---------------------------------------------------------------------------

ConformalMap = (Word, Mobius, HolomorphicSeries)


def apply(phi, x):
    """Evaluate the map at a point (spec: phi(x))."""
    return phi.apply(x)


def conformal_factor(phi, x) -> float:
    """Omega_phi(x): chain rule along the orbit for words, |phi'| for d=2."""
    return phi.omega(x)


def _series_fit_check(outer_radius: float, inner) -> None:
    if isinstance(inner, HolomorphicSeries):
        peak = inner.boundary_max()
    else:  # Mobius: sample the unit circle scaled to its domain
        ang = np.exp(2j * np.pi * np.arange(BOUNDARY_SAMPLES_2D) / BOUNDARY_SAMPLES_2D)
        peak = max(abs(inner.evaluate(z * (1 - 1e-9))) for z in ang)
    if peak >= outer_radius:
        raise RadiusError(
            f"inner image reaches radius {peak:.6g}, outside the outer disk"
        )


def compose(phi, psi):
    """phi after psi: apply(compose(phi, psi), x) == apply(phi, apply(psi, x))."""
    if isinstance(phi, Word) and isinstance(psi, Word):
        if phi.dim != psi.dim:
            raise ValueError("dimension mismatch")
        return Word(phi.dim, psi.generators + phi.generators)
    if isinstance(phi, Mobius) and isinstance(psi, Mobius):
        return Mobius(phi.matrix @ psi.matrix)
    if isinstance(phi, Word) and isinstance(psi, Mobius):
        return Mobius(phi.to_mobius().matrix @ psi.matrix)
    if isinstance(phi, Mobius) and isinstance(psi, Word):
        return Mobius(phi.matrix @ psi.to_mobius().matrix)

    # series cases; everything below is dimension 2
    if isinstance(phi, Word):
        phi = phi.to_mobius()
    if isinstance(psi, Word):
        psi = psi.to_mobius()
    if isinstance(phi, HolomorphicSeries) and isinstance(psi, HolomorphicSeries):
        _series_fit_check(phi.radius, psi)
        n = max(phi.truncation, psi.truncation)
        return HolomorphicSeries(
            series_compose_coeffs(phi.coeffs, psi.coeffs, n), radius=psi.radius
        )
    if isinstance(phi, HolomorphicSeries) and isinstance(psi, Mobius):
        n = phi.truncation
        inner = psi.to_series(n, radius=1.0)
        _series_fit_check(phi.radius, psi)
        return HolomorphicSeries(
            series_compose_coeffs(phi.coeffs, inner.coeffs, n), radius=1.0
        )
    if isinstance(phi, Mobius) and isinstance(psi, HolomorphicSeries):
        n = psi.truncation
        m = phi.matrix
        num = m[0, 0] * psi.coeffs.copy()
        num[0] += m[0, 1]
        den = m[1, 0] * psi.coeffs.copy()
        den[0] += m[1, 1]
        return HolomorphicSeries(
            _conv_trunc(num, series_reciprocal_coeffs(den, n), n), radius=psi.radius
        )
    raise TypeError("unsupported map combination")


def inverse(phi):
    if isinstance(phi, (Word, Mobius)):
        return phi.inverse()
    raise UnsupportedError("series maps are inverted pointwise, not globally")


class SchwarzianValue(NamedTuple):
    value: complex
    basepoint: complex


def schwarzian(phi, z) -> SchwarzianValue:
    """S(phi)(z) = phi'''/phi' - (3/2)(phi''/phi')^2 from the series jet."""
    z = _to_complex(z)
    if isinstance(phi, Mobius):
        d1 = phi.derivative(z, 1)
        if abs(d1) <= _DERIV_FLOOR:
            raise DegenerateError("vanishing derivative at the basepoint")
        d2 = phi.derivative(z, 2)
        d3 = phi.derivative(z, 3)
    elif isinstance(phi, HolomorphicSeries):
        if abs(z) >= phi.radius * (1 + 1e-12):
            raise RadiusError("basepoint outside the validity radius")
        d1 = phi.derivative_at(z, 1)
        if abs(d1) <= _DERIV_FLOOR:
            raise DegenerateError("vanishing derivative at the basepoint")
        d2 = phi.derivative_at(z, 2)
        d3 = phi.derivative_at(z, 3)
    else:
        raise TypeError("Schwarzian needs a dimension-2 analytic map")
    val = d3 / d1 - 1.5 * (d2 / d1) ** 2
    return SchwarzianValue(value=val, basepoint=z)


def certify_injective(phi: HolomorphicSeries, grid_size: int = 24) -> bool:
    """Best-effort injectivity check on a polar grid.

    True means phi' never vanished and all grid images stayed pairwise
    distinct (> 1e-12); it does not prove injectivity.  False exhibits a
    grid-level failure.  The verdict is cached on the series.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    radii = phi.radius * (1 - 1e-9) * (np.arange(1, grid_size + 1) / grid_size)
    angles = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    pts = np.concatenate(([0j], np.outer(radii, angles).ravel()))
    dvals = np.polyval(phi.derivative_coeffs(1)[::-1], pts)
    ok = bool(np.abs(dvals).min() > 1e-12)
    if ok:
        vals = np.polyval(phi.coeffs[::-1], pts)
        block = 1024
        for i in range(0, len(vals), block):
            seg = vals[i : i + block]
            diff = np.abs(vals[i:, None] - seg[None, :])
            iu = np.triu_indices(seg.shape[0], k=1, m=seg.shape[0])
            # pairs fully inside this block
            if diff[: seg.shape[0]][iu].size and diff[: seg.shape[0]][iu].min() <= 1e-12:
                ok = False
                break
            # pairs crossing the block boundary
            if diff[seg.shape[0] :].size and diff[seg.shape[0] :].min() <= 1e-12:
                ok = False
                break
    phi._injective = ok
    return ok


def mobius_from_disk_data(center: complex, scale: float, angle: float) -> Mobius:
    """Disk automorphism z -> scale*e^{i angle}(z+center)/(1+conj(center)z).

    Maps the unit disk onto the disk of radius `scale`; handy for building
    test maps with controlled image size.
    """
    if abs(center) >= 1:
        raise ValueError("center must lie in the open unit disk")
    rot = scale * cmath.exp(1j * angle)
    return Mobius([[rot, rot * center], [center.conjugate(), 1.0]])
