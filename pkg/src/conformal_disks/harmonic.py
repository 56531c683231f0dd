"""Harmonic polynomials on the flat disk and sphere-integral arithmetic.

Everything structural here is exact: sphere moments are rationals obtained
from half-integer Gamma factors (the sqrt(pi) powers always cancel), harmonic
projections use the recursive radial decomposition, and the degree-n bases
are orthogonalised with exact Gram-Schmidt.  Square roots of norms are only
applied at the float boundary.

Conventions: the Laplacian is -sum_i d_i^2, the sphere carries the rotation
invariant probability measure, and the inner product is the bilinear
L^2(S^{d-1}) pairing (no conjugation; complexified work conjugates the first
slot explicitly).
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .config import MIN_SEPARATION
from .errors import DimensionError, RegionError, SingularError
from .exact import gamma_half
from .polynomial import Polynomial, monomials, radial_power

# ---------------------------------------------------------------------------
# dimensions and moments
# ---------------------------------------------------------------------------


def dim_harm(d: int, n: int) -> int:
    """dim Harm_{d,n} = C(n+d-1, d-1) - C(n+d-3, d-1)."""
    if d < 2 or n < 0:
        raise ValueError("need d >= 2 and n >= 0")
    return math.comb(n + d - 1, d - 1) - (
        math.comb(n + d - 3, d - 1) if n >= 2 else 0
    )


@lru_cache(maxsize=None)
def _moment_sorted(d: int, gamma: tuple) -> Fraction:
    # Normalized moment of x^gamma over S^{d-1}; gamma sorted, all even.
    num = Fraction(1)
    pi_half = 0
    for g in gamma:
        r, e = gamma_half(g + 1)  # Gamma((g+1)/2)
        num *= r
        pi_half += e
    total = sum(gamma) + d
    den, e_den = gamma_half(total)  # Gamma((|gamma|+d)/2)
    r_d, e_d = gamma_half(d)  # Gamma(d/2)
    # moment = Gamma(d/2) * prod Gamma((g_i+1)/2) / (Gamma(1/2)^d Gamma(total/2))
    pi_half += e_d - e_den - d
    if pi_half != 0:
        raise AssertionError("pi powers must cancel in sphere moments")
    return num * r_d / den


def sphere_moment(d: int, alpha) -> Fraction:
    """Exact normalized integral of x^alpha over the unit sphere."""
    alpha = tuple(alpha)
    if len(alpha) != d:
        raise ValueError("multi-index length must equal the dimension")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    return _moment_sorted(d, tuple(sorted(alpha)))


def sphere_inner(p: Polynomial, q: Polynomial):
    """Bilinear L^2(S^{d-1}) pairing of two polynomials, exact."""
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    d = p.dim
    groups: dict[tuple, list] = {}
    for beta, cb in q.coeffs.items():
        groups.setdefault(tuple(b & 1 for b in beta), []).append((beta, cb))
    total = Fraction(0)
    for alpha, ca in p.coeffs.items():
        par = tuple(a & 1 for a in alpha)
        for beta, cb in groups.get(par, ()):
            m = _moment_sorted(d, tuple(sorted(a + b for a, b in zip(alpha, beta))))
            total = total + ca * cb * m
    return total


def sphere_inner_hermitian(p: Polynomial, q: Polynomial):
    """Sesquilinear pairing (conjugation in the first slot)."""
    return sphere_inner(p.conjugate(), q)


# ---------------------------------------------------------------------------
# harmonic projection
# ---------------------------------------------------------------------------


def _std_laplacian(p: Polynomial) -> Polynomial:
    # +sum d_i^2; the classical sign used by the radial decomposition below.
    return -p.laplacian()


def harmonic_decomposition(p: Polynomial) -> dict:
    """Write a homogeneous p as sum_k |x|^{2k} h_{n-2k} with h harmonic.

    Returns {k: h_{n-2k}}.  Uses Delta(|x|^{2k} h_m) = 2k(2k+2m+d-2)
    |x|^{2k-2} h_m to peel the decomposition off recursively.
    """
    if not p.is_homogeneous():
        raise ValueError("harmonic decomposition needs a homogeneous input")
    d = p.dim
    n = p.degree
    if n <= 1 or p.is_zero():
        return {0: p}
    sub = harmonic_decomposition(_std_laplacian(p))
    parts: dict[int, Polynomial] = {}
    rest = Polynomial.zero(d)
    for j, g in sub.items():
        k = j + 1
        m = n - 2 * k
        c = Fraction(2 * k * (2 * k + 2 * m + d - 2))
        h = g.scale(Fraction(1) / c)
        parts[k] = h
        rest = rest + radial_power(d, k) * h
    parts[0] = p - rest
    return parts


def harmonic_projection(p: Polynomial) -> Polynomial:
    """Harmonic component of a homogeneous polynomial."""
    return harmonic_decomposition(p)[0]


def is_harmonic(p: Polynomial) -> bool:
    return p.laplacian().is_zero()


def validate_harmonic(p: Polynomial, degree: int | None = None) -> Polynomial:
    """Check homogeneity and harmonicity, returning the polynomial."""
    if not p.is_homogeneous():
        raise ValueError("not homogeneous")
    if degree is not None and not p.is_zero() and p.degree != degree:
        raise ValueError("unexpected degree")
    if not is_harmonic(p):
        raise ValueError("not in the Laplacian kernel")
    return p


# ---------------------------------------------------------------------------
# orthogonal bases
# ---------------------------------------------------------------------------


class HarmonicBasis:
    """Orthogonal basis of Harm_{d,n} with exact norms.

    `orthogonal[k]` has coprime integer coefficients; the orthonormal basis
    element is orthogonal[k]/sqrt(norms_sq[k]), with the square root applied
    only when a float view or evaluation is requested.
    """

    __slots__ = ("d", "n", "orthogonal", "norms_sq")

    def __init__(self, d, n, orthogonal, norms_sq):
        self.d = d
        self.n = n
        self.orthogonal = tuple(orthogonal)
        self.norms_sq = tuple(norms_sq)

    @property
    def size(self) -> int:
        return len(self.orthogonal)

    def evaluate_orthonormal(self, k: int, point) -> float:
        v = self.orthogonal[k].evaluate([float(x) for x in point])
        return v / math.sqrt(self.norms_sq[k])

    @property
    def polys(self) -> tuple:
        """Float-normalized basis polynomials (coefficients exact binary)."""
        return tuple(
            u.scale(Fraction(1.0 / math.sqrt(n2)))
            for u, n2 in zip(self.orthogonal, self.norms_sq)
        )

    def gram_float(self) -> np.ndarray:
        ps = self.polys
        g = np.empty((len(ps), len(ps)))
        for i, p in enumerate(ps):
            for j in range(i, len(ps)):
                v = float(sphere_inner(p, ps[j]))
                g[i, j] = g[j, i] = v
        return g


_basis_cache: dict = {}
_basis_lock = threading.Lock()


def _basis_candidates(d: int, n: int) -> list:
    # Multi-indices with last exponent <= 1: their harmonic projections are a
    # basis of Harm_{d,n} (Cauchy data on x_d = 0 is triangular independent).
    return [a for a in monomials(d, n) if a[d - 1] <= 1]


def orthonormal_basis(d: int, n: int) -> HarmonicBasis:
    """Construct (and cache) the orthogonal basis of Harm_{d,n}."""
    key = (d, n)
    basis = _basis_cache.get(key)
    if basis is not None:
        return basis
    with _basis_lock:
        basis = _basis_cache.get(key)
        if basis is not None:
            return basis
        cands = _basis_candidates(d, n)
        if len(cands) != dim_harm(d, n):
            raise AssertionError("candidate count must match dim Harm")
        orth: list[Polynomial] = []
        norms: list[Fraction] = []
        pars: list[tuple] = []
        for alpha in cands:
            par = tuple(a & 1 for a in alpha)
            b = harmonic_projection(Polynomial.monomial(d, alpha))
            u = b
            for p_j, n2_j, par_j in zip(orth, norms, pars):
                if par_j != par:
                    continue  # distinct parity classes are already orthogonal
                c = sphere_inner(b, p_j) / n2_j
                if c:
                    u = u - p_j.scale(c)
            if u.is_zero():
                raise AssertionError("projected candidates must be independent")
            u = u.primitive()
            orth.append(u)
            norms.append(sphere_inner(u, u))
            pars.append(par)
        basis = HarmonicBasis(d, n, orth, norms)
        _basis_cache[key] = basis
        return basis


def zonal(d: int, n: int, a) -> Polynomial:
    """Reproducing kernel Z_n(a, .) of Harm_{d,n}, exact for rational a."""
    basis = orthonormal_basis(d, n)
    coords = [x if isinstance(x, Fraction) else Fraction(x) for x in a]
    out = Polynomial.zero(d)
    for u, n2 in zip(basis.orthogonal, basis.norms_sq):
        val = u.evaluate(coords)
        if val:
            out = out + u.scale(val / n2)
    return out


# ---------------------------------------------------------------------------
# certified nullity of the Laplacian (dimension cross-check)
# ---------------------------------------------------------------------------

_NULLITY_PRIME = 2147483647


def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    m = np.ascontiguousarray(mat % p, dtype=np.int64)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivots = np.nonzero(m[r:, c])[0]
        if pivots.size == 0:
            continue
        pr = r + int(pivots[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[r + 1 :, c].copy()
        nz = np.nonzero(col)[0]
        if nz.size:
            m[r + 1 + nz] = (m[r + 1 + nz] - np.outer(col[nz], m[r])) % p
        r += 1
    return r


def laplacian_nullity(d: int, n: int) -> int:
    """Exact dim ker(Laplacian on degree-n polynomials), independently of
    dim_harm.

    Certified both ways with modular arithmetic: a mod-p echelon rank of the
    Laplacian matrix bounds the nullity from above, and mod-p independence of
    the exact projected candidates (verified harmonic in integer arithmetic)
    bounds it from below.  A failed certificate raises.
    """
    mons_n = monomials(d, n)
    if n < 2:
        return len(mons_n)
    mons_m = monomials(d, n - 2)
    col = {a: i for i, a in enumerate(mons_n)}
    row = {a: i for i, a in enumerate(mons_m)}
    lap = np.zeros((len(mons_m), len(mons_n)), dtype=np.int64)
    for a, j in col.items():
        for i in range(d):
            if a[i] >= 2:
                b = list(a)
                b[i] -= 2
                lap[row[tuple(b)], j] += a[i] * (a[i] - 1)
    cands = _basis_candidates(d, n)
    a_dn = len(cands)
    rank = _rank_mod_p(lap, _NULLITY_PRIME)
    if rank < len(mons_n) - a_dn:
        raise AssertionError("rank certificate failed; retry with another prime")
    # Lower bound: projected candidates are harmonic and independent.
    basis_mat = np.zeros((len(mons_n), a_dn), dtype=np.int64)
    for k, alpha in enumerate(cands):
        h = harmonic_projection(Polynomial.monomial(d, alpha)).primitive()
        if not (-h.laplacian()).is_zero():
            raise AssertionError("projection failed to be harmonic")
        for beta, c in h.coeffs.items():
            basis_mat[col[beta], k] = c.numerator % _NULLITY_PRIME
    if _rank_mod_p(basis_mat, _NULLITY_PRIME) != a_dn:
        raise AssertionError("independence certificate failed")
    return len(mons_n) - rank


# ---------------------------------------------------------------------------
# Gegenbauer polynomials and Green kernels
# ---------------------------------------------------------------------------


def gegenbauer(d: int, n: int, t):
    """C_n^{(d-2)/2}(t) by the three-term recurrence.  Needs d >= 3."""
    if d < 3:
        raise DimensionError("Gegenbauer parameter vanishes for d = 2")
    if n < 0:
        raise ValueError("degree must be non-negative")
    lam = Fraction(d - 2, 2)
    if n == 0:
        return t * 0 + 1
    prev, cur = t * 0 + 1, 2 * lam * t
    for k in range(2, n + 1):
        nxt = (2 * t * (k + lam - 1) * cur - (k + 2 * lam - 2) * prev) / k
        prev, cur = cur, nxt
    return cur


def addition_coefficient(d: int, n: int) -> Fraction:
    """c_{d,n} = (d-2)/(2n+d-2) linking C_n to the zonal sum (d >= 3)."""
    if d < 3:
        raise DimensionError("addition coefficient undefined for d = 2")
    return Fraction(d - 2, 2 * n + d - 2)


def surface_area(d: int) -> float:
    """omega_d, the area of the unit sphere S^{d-1}."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def green_constant(d: int) -> float:
    """1/((d-2) omega_d), the strength of the fundamental solution, d >= 3."""
    if d < 3:
        raise DimensionError("use the log kernel for d = 2")
    return 1.0 / ((d - 2) * surface_area(d))


def green_kernel(d: int, x, y) -> float:
    """Fundamental solution of the non-negative Laplacian."""
    dx = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r = float(np.sqrt(np.dot(dx, dx)))
    if r < MIN_SEPARATION:
        raise SingularError("Green kernel evaluated on the diagonal")
    if d == 2:
        return -math.log(r) / (2 * math.pi)
    return green_constant(d) / r ** (d - 2)


def green_expansion_partial(d: int, x, y, degree: int) -> float:
    """Partial sum (through `degree`) of the harmonic expansion of the Green
    kernel, valid for ||x|| > ||y||."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    rx = float(np.linalg.norm(xv))
    ry = float(np.linalg.norm(yv))
    if rx <= ry:
        raise RegionError("expansion needs ||x|| > ||y||")
    if rx < MIN_SEPARATION:
        raise SingularError("expansion center at the origin")
    if d == 2:
        # log|z-w| = log|z| - sum_k Re((w/z)^k)/k for |z| > |w|
        z = complex(xv[0], xv[1])
        w = complex(yv[0], yv[1])
        total = math.log(abs(z))
        if ry > 0:
            u = w / z
            upow = 1.0 + 0.0j
            for k in range(1, degree + 1):
                upow *= u
                total -= (upow.real) / k
        return -total / (2 * math.pi)
    total = 0.0
    if ry == 0:
        return green_constant(d) / rx ** (d - 2)
    t = float(np.dot(xv, yv)) / (rx * ry)
    ratio = ry / rx
    for n in range(degree + 1):
        total += float(gegenbauer(d, n, t)) * ratio**n
    return green_constant(d) * total / rx ** (d - 2)


def expansion_term(d: int, n: int, x, y) -> float:
    """Single degree-n term of the expansion (same validity region)."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    rx = float(np.linalg.norm(xv))
    ry = float(np.linalg.norm(yv))
    if rx <= ry:
        raise RegionError("expansion needs ||x|| > ||y||")
    if d == 2:
        if n == 0:
            return -math.log(rx) / (2 * math.pi)
        if ry == 0:
            return 0.0
        u = complex(yv[0], yv[1]) / complex(xv[0], xv[1])
        return ((u**n).real / n) / (2 * math.pi)
    if ry == 0:
        return green_constant(d) / rx ** (d - 2) if n == 0 else 0.0
    t = float(np.dot(xv, yv)) / (rx * ry)
    return (
        green_constant(d)
        * float(gegenbauer(d, n, t))
        * (ry / rx) ** n
        / rx ** (d - 2)
    )
