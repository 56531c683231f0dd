"""Distributions on harmonic functions over the unit disk.

A HarmonicDistribution is stored in up to two coupled forms:

* point form - a finite combination of derivatives of deltas.  An atom
  (a, alpha, c) stands for c*d^alpha delta_a with an ordinary multi-index
  alpha in every dimension; it pairs with u to c*(-1)^{|alpha|}(d^alpha u)(a).
* sequence form - polynomials (t_n) with T(u) = sum_n (t_n, u_n) for the
  L^2(S^{d-1}) pairing.  In the complexified d = 2 case the pairing is
  bilinear (no conjugation), so z^n pairs against zbar^n and linearity in
  the coefficients is exact.

Sequences derived from point forms are exact (rational or Gaussian-rational
coefficients).  Decay certificates (C, rho) assert ||t_n|| <= C rho^n for
every n; for point forms they are proved from closed-form norm bounds, not
fitted.  Wirtinger derivatives d_z^p d_zbar^q are supplied as exact
combinations of ordinary atoms, see `wirtinger_delta`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .config import CERTIFICATE_PAD, sequence_truncation
from .errors import DimensionError, DomainError, TruncationError
from .exact import GaussianRational
from .harmonic import orthonormal_basis, sphere_inner
from .polynomial import Polynomial


def _exact_scalar(c):
    if isinstance(c, (Fraction, GaussianRational)):
        return c
    if isinstance(c, complex):
        return GaussianRational.from_value(c)
    return Fraction(c)


def _exact_coords(a):
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in a)


class PointAtom(NamedTuple):
    center: tuple
    alpha: tuple
    coef: object

    @property
    def order(self) -> int:
        return sum(self.alpha)


def _merge_atoms(atoms):
    merged: dict = {}
    for center, alpha, coef in atoms:
        key = (center, alpha)
        merged[key] = merged.get(key, 0) + coef
    return tuple(
        PointAtom(c, a, v) for (c, a), v in merged.items() if not (v == 0)
    )


@lru_cache(maxsize=None)
def _complex_power(n: int, conjugate: bool) -> Polynomial:
    """z^n (or zbar^n) as an exact polynomial in (x1, x2)."""
    coeffs = {}
    unit = GaussianRational(0, -1 if conjugate else 1)
    for k in range(n + 1):
        coeffs[(n - k, k)] = GaussianRational(math.comb(n, k)) * unit**k
    return Polynomial(2, coeffs)


@lru_cache(maxsize=None)
def _wirtinger_of_ordinary(i: int, j: int) -> tuple:
    """d_x^i d_y^j expanded as sum of w * d_z^p d_zbar^q, exact."""
    unit = GaussianRational(0, 1)
    out: dict = {}
    for r in range(i + 1):
        for s in range(j + 1):
            p, q = r + s, (i - r) + (j - s)
            w = GaussianRational(math.comb(i, r) * math.comb(j, s))
            w = w * unit**j * GaussianRational((-1) ** (j - s))
            out[(p, q)] = out.get((p, q), GaussianRational(0)) + w
    return tuple((pq, w) for pq, w in out.items() if w)


@lru_cache(maxsize=None)
def _ordinary_of_wirtinger(p: int, q: int) -> tuple:
    """d_z^p d_zbar^q expanded as sum of w * d_x^i d_y^j, exact."""
    half = GaussianRational(Fraction(1, 2))
    minus_i = GaussianRational(0, -1)
    plus_i = GaussianRational(0, 1)
    out: dict = {}
    for r in range(p + 1):
        for s in range(q + 1):
            i, j = r + s, (p - r) + (q - s)
            w = half ** (p + q) * GaussianRational(math.comb(p, r) * math.comb(q, s))
            w = w * minus_i ** (p - r) * plus_i ** (q - s)
            out[(i, j)] = out.get((i, j), GaussianRational(0)) + w
    return tuple((ij, w) for ij, w in out.items() if w)


def _falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


# ---------------------------------------------------------------------------
# closed-form norm bounds for decay certificates
# ---------------------------------------------------------------------------


def _log_dim_harm(d: int, n: int) -> float:
    if n == 0:
        return 0.0
    if d == 2:
        return math.log(2.0)
    # A_{d,n} = (2n+d-2)/(d-2) * binom(n+d-3, d-3)
    return (
        math.log((2 * n + d - 2) / (d - 2))
        + math.lgamma(n + d - 2)
        - math.lgamma(n + 1)
        - math.lgamma(d - 2)
    )


def _atom_log_bound(d: int, k: int, log_r: float, n: int) -> float:
    """log of a proven bound on ||t_n|| for a unit-coefficient atom of
    derivative order k centered at radius r = exp(log_r).

    Chains the exact identity sum_i ||d_i u_n||^2 = n(2n+d-2) ||u_n||^2 on
    the sphere with the reproducing-kernel estimate
    |v(a)| <= sqrt(A_{d,m}) r^m ||v|| for v harmonic of degree m.
    """
    if n < k:
        return -math.inf
    val = 0.5 * _log_dim_harm(d, n - k) + (n - k) * log_r
    for j in range(k):
        val += 0.5 * math.log((n - j) * (2 * (n - j) + d - 2))
    return val


def _atom_certificate_c(d: int, k: int, r: float, rho: float) -> float:
    """sup_n ||t_n|| / rho^n for a unit atom, via the closed-form bounds.

    The bound sequence b_n = exp(_atom_log_bound) / rho^n has a ratio
    b_{n+1}/b_n that decreases monotonically in n, so it is unimodal; the
    peak is located by bisection and the supremum read off a small window.
    """
    if r == 0:
        # only n = k contributes (the (n-k) log r factor vanishes there)
        return math.exp(_atom_log_bound(d, k, 0.0, k) - k * math.log(rho)) if k else 1.0
    log_r = math.log(r)
    log_rho = math.log(rho)

    def g(n: int) -> float:
        return _atom_log_bound(d, k, log_r, n) - n * log_rho

    def increasing_at(n: int) -> bool:
        return g(n + 1) > g(n)

    lo, hi = k, k + 1
    while increasing_at(hi) and hi < 1 << 50:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if increasing_at(mid):
            lo = mid + 1
        else:
            hi = mid
    peak = lo
    best = max(g(m) for m in range(max(k, peak - 2), peak + 3))
    return math.exp(best)


def delta_certificate(d: int, r: float) -> tuple:
    """(C, rho) proven for delta at radius r (an order-0 atom)."""
    rho = r + CERTIFICATE_PAD
    return (_atom_certificate_c(d, 0, r, rho), rho)


# ---------------------------------------------------------------------------
# the distribution type
# ---------------------------------------------------------------------------


class HarmonicDistribution:
    """Functional on harmonic functions: sequence pairing + optional points."""

    __slots__ = ("dim", "truncation", "points", "certificate", "_sequence")

    def __init__(
        self,
        dim: int,
        *,
        points=None,
        sequence=None,
        certificate=None,
        truncation: int | None = None,
    ):
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        self.dim = dim
        self.truncation = sequence_truncation(dim, truncation)
        self.points = None
        if points is not None:
            atoms = []
            for center, alpha, coef in points:
                center = _exact_coords(center)
                alpha = tuple(int(x) for x in alpha)
                if len(center) != dim or len(alpha) != dim:
                    raise ValueError("atom shape does not match the dimension")
                if any(x < 0 for x in alpha):
                    raise ValueError("derivative orders must be non-negative")
                if sum(f * f for f in center) >= 1:
                    raise DomainError("atom center must lie in the open unit disk")
                atoms.append((center, alpha, _exact_scalar(coef)))
            self.points = _merge_atoms(atoms)
        self._sequence = None
        if sequence is not None:
            seq = {}
            for n, p in sequence.items():
                if p.is_zero():
                    continue
                if p.dim != dim or not p.is_homogeneous() or p.degree != n:
                    raise ValueError("sequence entries must be homogeneous of their degree")
                if not p.laplacian().is_zero():
                    raise ValueError("sequence entries must be harmonic")
                seq[int(n)] = p
            if self.points is not None:
                derived = self._sequence_from_points()
                if derived != seq:
                    raise ValueError("sequence form does not match the point form")
            self._sequence = seq
        if certificate is not None:
            c, rho = float(certificate[0]), float(certificate[1])
            if not (c >= 0 and 0 < rho < 1):
                raise ValueError("certificate must satisfy C >= 0, 0 < rho < 1")
            certificate = (c, rho)
        self.certificate = certificate
        if certificate is not None and self._sequence is not None:
            self._validate_certificate()

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_points(cls, dim, points, truncation=None, certificate="auto"):
        t = cls(dim, points=points, truncation=truncation)
        if certificate == "auto":
            t.certificate = t._point_certificate()
        else:
            t.certificate = certificate
        return t

    @classmethod
    def from_sequence(cls, dim, sequence, certificate=None, truncation=None):
        return cls(dim, sequence=sequence, certificate=certificate, truncation=truncation)

    def _point_certificate(self):
        if not self.points:
            return (0.0, 0.5)
        radii = [
            math.sqrt(float(sum(f * f for f in a.center))) for a in self.points
        ]
        rho = max(radii) + CERTIFICATE_PAD
        total = 0.0
        for a, r in zip(self.points, radii):
            total += abs(complex(a.coef)) * _atom_certificate_c(
                self.dim, a.order, r, rho
            )
        return (total, rho)

    def _validate_certificate(self):
        c, rho = self.certificate
        for n in self.sequence:
            if math.sqrt(float(self.norm_sq(n))) > c * rho**n * (1 + 1e-12) + 1e-300:
                raise ValueError("certificate violated on a stored degree")

    # -- sequence form ----------------------------------------------------

    @property
    def sequence(self) -> dict:
        if self._sequence is None:
            self._sequence = self._sequence_from_points() if self.points else {}
        return self._sequence

    def _sequence_from_points(self) -> dict:
        if self.dim == 2:
            return self._sequence_from_points_2d()
        seq: dict = {}
        for n in range(self.truncation + 1):
            basis = orthonormal_basis(self.dim, n)
            acc = Polynomial.zero(self.dim)
            for atom in self.points:
                k = atom.order
                if n < k:
                    continue
                sign = -1 if k % 2 else 1
                # t_n = (-1)^k d_a^alpha Z_n(a, .), expanded over the basis
                for u, n2 in zip(basis.orthogonal, basis.norms_sq):
                    val = u.diff_alpha(atom.alpha).evaluate(atom.center)
                    if val:
                        acc = acc + u.scale(sign * atom.coef * val / n2)
            if not acc.is_zero():
                seq[n] = acc
        return seq

    def _sequence_from_points_2d(self) -> dict:
        # bilinear convention: t_n = lam_n z^n + mu_n zbar^n with
        # lam_n = T(zbar^n) and mu_n = T(z^n)
        lam = [GaussianRational(0)] * (self.truncation + 1)
        mu = [GaussianRational(0)] * (self.truncation + 1)
        t0 = GaussianRational(0)
        for atom in self.points:
            c = GaussianRational.from_value(atom.coef)
            sign = GaussianRational(-1 if atom.order % 2 else 1)
            a = GaussianRational(atom.center[0], atom.center[1])
            abar = a.conjugate()
            for (p, q), w in _wirtinger_of_ordinary(*atom.alpha):
                if p > 0 and q > 0:
                    continue  # d_z d_zbar kills harmonic functions
                cw = sign * c * w
                if p == 0 and q == 0:
                    t0 = t0 + cw
                if q == 0:
                    # T(z^n) = cw * n!/(n-p)! a^{n-p}
                    for n in range(max(p, 1), self.truncation + 1):
                        mu[n] = mu[n] + cw * GaussianRational(_falling(n, p)) * a ** (
                            n - p
                        )
                if p == 0:
                    for n in range(max(q, 1), self.truncation + 1):
                        lam[n] = lam[n] + cw * GaussianRational(
                            _falling(n, q)
                        ) * abar ** (n - q)
        seq: dict = {}
        if t0:
            seq[0] = Polynomial(2, {(0, 0): t0})
        for n in range(1, self.truncation + 1):
            acc = Polynomial.zero(2)
            if lam[n]:
                acc = acc + _complex_power(n, False).scale(lam[n])
            if mu[n]:
                acc = acc + _complex_power(n, True).scale(mu[n])
            if not acc.is_zero():
                seq[n] = acc
        return seq

    # -- basic queries ------------------------------------------------------

    def component(self, n: int) -> Polynomial:
        return self.sequence.get(n, Polynomial.zero(self.dim))

    def norm_sq(self, n: int):
        """Exact ||t_n||^2 (the honest Hermitian norm when complexified)."""
        t = self.sequence.get(n)
        if t is None:
            return Fraction(0)
        v = sphere_inner(t.conjugate(), t)
        if isinstance(v, GaussianRational):
            if v.im != 0:
                raise AssertionError("norm must be real")
            return v.re
        return v

    def is_zero_mean(self) -> bool:
        """True iff t_0 = 0 exactly."""
        if self.points is not None and self._sequence is None:
            # only the alpha = 0 part reaches degree zero
            total = GaussianRational(0)
            for atom in self.points:
                if atom.order == 0:
                    total = total + GaussianRational.from_value(atom.coef)
            return not total
        return 0 not in self.sequence

    def is_real(self) -> bool:
        return all(p.is_real() for p in self.sequence.values())

    # -- linear structure ------------------------------------------------------

    def _combine(self, other, c_other) -> "HarmonicDistribution":
        if not isinstance(other, HarmonicDistribution) or other.dim != self.dim:
            raise ValueError("can only combine distributions of equal dimension")
        trunc = min(self.truncation, other.truncation)
        out = HarmonicDistribution(self.dim, truncation=trunc)
        if self.points is not None and other.points is not None:
            out.points = _merge_atoms(
                [tuple(a) for a in self.points]
                + [(a.center, a.alpha, c_other * a.coef) for a in other.points]
            )
        seq: dict = {}
        for n in set(self.sequence) | set(other.sequence):
            if n > trunc:
                continue
            p = self.component(n) + other.component(n).scale(c_other)
            if not p.is_zero():
                seq[n] = p
        out._sequence = seq
        if self.certificate and other.certificate:
            ca, ra = self.certificate
            cb, rb = other.certificate
            out.certificate = (ca + abs(complex(c_other)) * cb, max(ra, rb))
        return out

    def __add__(self, other):
        return self._combine(other, _exact_scalar(1))

    def __sub__(self, other):
        return self._combine(other, _exact_scalar(-1))

    def scale(self, c) -> "HarmonicDistribution":
        c = _exact_scalar(c)
        out = HarmonicDistribution(self.dim, truncation=self.truncation)
        if self.points is not None:
            out.points = _merge_atoms(
                [(a.center, a.alpha, c * a.coef) for a in self.points]
            )
        if self._sequence is not None:
            seq = {}
            for n, p in self._sequence.items():
                sp = p.scale(c)
                if not sp.is_zero():
                    seq[n] = sp
            out._sequence = seq
        if self.certificate:
            out.certificate = (abs(complex(c)) * self.certificate[0], self.certificate[1])
        return out

    def __neg__(self):
        return self.scale(-1)

    def record(self) -> dict:
        from . import records

        return records.distribution_record(self)

    def __repr__(self):
        pts = len(self.points) if self.points is not None else 0
        degs = sorted(self.sequence)
        shown = f"degrees={degs[:6]}{'...' if len(degs) > 6 else ''}"
        return f"HarmonicDistribution(d={self.dim}, atoms={pts}, {shown})"


class HarmonicFunction:
    """A harmonic function supplied as homogeneous components.

    `complete=True` means components beyond the listed degrees vanish (a
    polynomial); `complete=False` marks a truncated expansion.
    """

    __slots__ = ("dim", "parts", "complete")

    def __init__(self, dim: int, parts: dict, complete: bool = True):
        self.dim = dim
        checked = {}
        for n, p in parts.items():
            if p.is_zero():
                continue
            if p.dim != dim or not p.is_homogeneous() or p.degree != n:
                raise ValueError("components must be homogeneous of their degree")
            if not p.laplacian().is_zero():
                raise ValueError("components must be harmonic")
            checked[int(n)] = p
        self.parts = checked
        self.complete = bool(complete)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "HarmonicFunction":
        if not p.laplacian().is_zero():
            raise ValueError("not a harmonic polynomial")
        return cls(p.dim, p.homogeneous_parts(), complete=True)

    @property
    def max_degree(self) -> int:
        return max(self.parts, default=-1)


def _as_harmonic_function(u, dim: int) -> HarmonicFunction:
    if isinstance(u, HarmonicFunction):
        if u.dim != dim:
            raise ValueError("dimension mismatch")
        return u
    if isinstance(u, Polynomial):
        if u.dim != dim:
            raise ValueError("dimension mismatch")
        return HarmonicFunction.from_polynomial(u)
    raise TypeError("expected a Polynomial or HarmonicFunction")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def delta_at(a, truncation: int | None = None) -> HarmonicDistribution:
    """The evaluation functional u -> u(a), ||a|| < 1."""
    if isinstance(a, (complex, float, int)):
        a = (complex(a).real, complex(a).imag)
    coords = _exact_coords(a)
    d = len(coords)
    t = HarmonicDistribution(
        d, points=[(coords, (0,) * d, 1)], truncation=truncation
    )
    r = math.sqrt(float(sum(f * f for f in coords)))
    t.certificate = delta_certificate(d, r)
    return t


def derivative_delta(
    a, alpha, sign_convention: str = "distributional", truncation: int | None = None
) -> HarmonicDistribution:
    """The functional u -> (-1)^{|alpha|} (d^alpha u)(a), ordinary partials.

    With sign_convention="direct" the pairing returns (d^alpha u)(a)
    instead.  For Wirtinger derivatives in d = 2 see `wirtinger_delta`.
    """
    if sign_convention not in ("distributional", "direct"):
        raise ValueError("unknown sign convention")
    if isinstance(a, (complex, float, int)):
        a = (complex(a).real, complex(a).imag)
    coords = _exact_coords(a)
    d = len(coords)
    alpha = tuple(int(x) for x in alpha)
    coef = -1 if (sign_convention == "direct" and sum(alpha) % 2) else 1
    t = HarmonicDistribution(d, points=[(coords, alpha, coef)], truncation=truncation)
    t.certificate = t._point_certificate()
    return t


def wirtinger_delta(
    a, p: int, q: int, sign_convention: str = "distributional", truncation=None
) -> HarmonicDistribution:
    """d_z^p d_zbar^q delta_a in d = 2, as an exact ordinary-atom combination.

    Pairs with u to (-1)^{p+q} (d_z^p d_zbar^q u)(a) under the default
    convention.
    """
    if sign_convention not in ("distributional", "direct"):
        raise ValueError("unknown sign convention")
    if isinstance(a, (complex, float, int)):
        a = (complex(a).real, complex(a).imag)
    coords = _exact_coords(a)
    if len(coords) != 2:
        raise DimensionError("Wirtinger derivatives live in dimension two")
    sign = -1 if (sign_convention == "direct" and (p + q) % 2) else 1
    points = [
        (coords, ij, w * GaussianRational(sign))
        for ij, w in _ordinary_of_wirtinger(p, q)
    ]
    t = HarmonicDistribution(2, points=points, truncation=truncation)
    t.certificate = t._point_certificate()
    return t


def pair(t: HarmonicDistribution, u):
    """T(u) = sum_n (t_n, u_n); bilinear, exact for rational inputs."""
    uf = _as_harmonic_function(u, t.dim)
    needed = sorted(t.sequence)
    if not uf.complete:
        missing = [n for n in needed if n not in uf.parts]
        if missing:
            raise TruncationError(
                f"the function lacks degrees {missing} that the functional stores"
            )
        if t.certificate is not None and uf.max_degree < t.truncation:
            raise TruncationError(
                "the functional may have terms beyond the supplied expansion"
            )
    total = None
    for n in needed:
        un = uf.parts.get(n)
        if un is None:
            continue
        term = sphere_inner(t.sequence[n], un)
        total = term if total is None else total + term
    if total is None:
        return Fraction(0)
    if isinstance(total, GaussianRational) and total.im == 0:
        return total.re
    return total


def growth_check(t: HarmonicDistribution):
    """Fit and then hard-verify a geometric decay certificate.

    Returns (C, rho) with rho < 1 - 1e-6, or None when no such certificate
    is consistent with the stored degrees.  The fit is least squares on
    log||t_n||; the returned constants are verified pointwise on every
    stored degree (and held above the construction certificate so the
    unstored tail stays covered).
    """
    norms = {n: math.sqrt(float(t.norm_sq(n))) for n in sorted(t.sequence)}
    nonzero = {n: v for n, v in norms.items() if v > 0}
    if not nonzero:
        return (0.0, 0.5)
    if len(nonzero) == 1:
        ((n0, v0),) = nonzero.items()
        rho = 0.5 if t.certificate is None else t.certificate[1]
        if rho >= 1 - 1e-6:
            return None
        c = v0 / rho**n0
        if t.certificate is not None:
            c = max(c, t.certificate[0])
        return (c, rho)
    ns = list(nonzero)
    ys = [math.log(v) for v in nonzero.values()]
    nbar = sum(ns) / len(ns)
    ybar = sum(ys) / len(ys)
    denom = sum((n - nbar) ** 2 for n in ns)
    slope = sum((n - nbar) * (y - ybar) for n, y in zip(ns, ys)) / denom
    rho = math.exp(slope)
    if t.certificate is not None:
        rho = max(rho, t.certificate[1])
    if rho >= 1 - 1e-6:
        return None
    c = max(v / rho**n for n, v in nonzero.items())
    if t.certificate is not None:
        c = max(c, t.certificate[0])
    return (c, rho)


def _point_tail(t: HarmonicDistribution, n_start: int) -> float:
    """Certified upper bound on sum_{n >= n_start} w_n ||t_n||^2 for a point
    form, from the per-atom closed-form bounds (exact for plain deltas)."""
    d = t.dim
    positive = []  # (|coef|, order, log r) for atoms off the origin
    at_origin = []  # (|coef|, order); these only reach degree == order
    for a in t.points:
        r2 = sum(f * f for f in a.center)
        mag = abs(complex(a.coef))
        if r2 == 0:
            at_origin.append((mag, a.order))
        else:
            positive.append((mag, a.order, 0.5 * math.log(float(r2))))

    def weight(n):
        return (2 * n + d - 2) / (d - 2)

    tail = 0.0
    for mag, k in at_origin:
        if k >= n_start:
            tail += weight(k) * (mag * math.exp(_atom_log_bound(d, k, 0.0, k))) ** 2
    if not positive:
        return tail
    n = n_start
    while True:
        bound = sum(
            mag * math.exp(_atom_log_bound(d, k, lr, n)) for mag, k, lr in positive
        )
        term = weight(n) * bound * bound
        tail += term
        # each atom's bound ratio decreases in n, so q dominates the rest
        q = (weight(n + 1) / weight(n)) * max(
            math.exp(2 * (_atom_log_bound(d, k, lr, n + 1) - _atom_log_bound(d, k, lr, n)))
            for mag, k, lr in positive
        )
        if q < 1 and term * q / (1 - q) < 1e-15 * (tail + 1):
            tail += term * q / (1 - q)
            return tail
        if n > n_start + 200000:
            return math.inf  # decay too slow to certify numerically
        n += 1


def cft_norm_sq(t: HarmonicDistribution):
    """sum_n (2n+d-2)/(d-2) ||t_n||^2 with a certified tail bound; d >= 3."""
    d = t.dim
    if d == 2:
        raise DimensionError("the degree-weighted inner product needs d >= 3")
    total = 0.0
    norms = {n: float(t.norm_sq(n)) for n in t.sequence}
    for n, v in norms.items():
        total += (2 * n + d - 2) / (d - 2) * v
    if t.points is not None:
        return total + _point_tail(t, t.truncation + 1)
    if t.certificate is None:
        ns = sorted(norms)
        vals = [math.sqrt(norms[n]) for n in ns]
        if len(vals) >= 2 and all(b >= a for a, b in zip(vals, vals[1:])):
            return math.inf
        return total  # finitely supported, no tail
    c, rho = t.certificate
    x = rho * rho
    if x >= 1:
        return math.inf
    n0 = t.truncation + 1
    # sum_{n >= n0} (2n + d - 2) x^n in closed form
    geo = x**n0 / (1 - x)
    lin = x**n0 * (n0 - (n0 - 1) * x) / (1 - x) ** 2
    tail = (2 * lin + (d - 2) * geo) / (d - 2) * c * c
    return total + tail


def is_zero_mean(t: HarmonicDistribution) -> bool:
    return t.is_zero_mean()
