"""The observable algebra Sym(H'(D)) and its conformal structure.

Observables are finite linear combinations of symmetric words of
distributions.  This module implements

* pushforwards W_phi of point-form distributions, with the covariance
  weight Omega^{(d-2)/2} and the holomorphic chain rule in d = 2;
* the d = 2 harmonic cocycle H_phi(z,w) = log|(phi(z)-phi(w))/(z-w)|
  - (1/2)log|phi'(z)| - (1/2)log|phi'(w)| together with its bivariate
  coefficient table A_{n,m} (the expansion of phi'(z)phi'(w)/(phi(z)-phi(w))^2
  - 1/(z-w)^2);
* contraction kernels (Green, cocycle-corrected Green, plain cocycle) and
  their symbolic derivative evaluation on point forms;
* the configuration products: per-factor exp(-(2pi)^{-1} d_{H_phi})
  corrections in d = 2, pushforward, and cross-factor Wick contractions;
* normalization, vacuum states (sums over perfect matchings), and the
  two-sided anomaly check.

All bivariate coefficient tables are built once per map with FFT
convolutions; entries are float-exact on the band n + m <= N - 3.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.signal import fftconvolve

from .config import COCYCLE_TABLE_SIZE, MIN_SEPARATION
from .conformal import HolomorphicSeries, Mobius, Word, certify_injective
from .distributions import (
    HarmonicDistribution,
    _ordinary_of_wirtinger,
    _wirtinger_of_ordinary,
)
from .errors import (
    DegenerateError,
    DimensionError,
    SeparationError,
    TruncationError,
    UnsupportedError,
    ZeroMeanError,
)
from .exact import GaussianRational
from .harmonic import green_constant, surface_area
from .operad import DiskConfiguration, DiskEmbedding
from .polynomial import Polynomial

_EXACT_TYPES = (int, Fraction, GaussianRational)


def _coef_mul(x, y):
    if isinstance(x, _EXACT_TYPES) and isinstance(y, _EXACT_TYPES):
        return x * y
    return complex(x) * complex(y)


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


class Observable:
    """Finite linear combination of symmetric words of distributions."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms):
        self.dim = dim
        clean = []
        for coef, word in terms:
            if not coef:
                continue
            word = tuple(word)
            for t in word:
                if not isinstance(t, HarmonicDistribution) or t.dim != dim:
                    raise ValueError("word entries must be distributions of the right dimension")
            clean.append((coef, word))
        self.terms = tuple(clean)

    @classmethod
    def from_word(cls, word, coef=1) -> "Observable":
        word = tuple(word)
        if not word:
            raise ValueError("use Observable.scalar for the empty word")
        return cls(word[0].dim, [(coef, word)])

    @classmethod
    def scalar(cls, dim: int, value) -> "Observable":
        return cls(dim, [(value, ())])

    def scale(self, c) -> "Observable":
        return Observable(self.dim, [(_coef_mul(c, coef), w) for coef, w in self.terms])

    def __add__(self, other: "Observable") -> "Observable":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Observable(self.dim, list(self.terms) + list(other.terms))

    def __mul__(self, other: "Observable") -> "Observable":
        """Plain symmetric product (no contractions)."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Observable(
            self.dim,
            [
                (_coef_mul(ca, cb), wa + wb)
                for ca, wa in self.terms
                for cb, wb in other.terms
            ],
        )

    def map_words(self, fn) -> "Observable":
        return Observable(
            self.dim, [(coef, tuple(fn(t) for t in word)) for coef, word in self.terms]
        )

    @property
    def vacuum_component(self):
        total = 0
        for coef, word in self.terms:
            if not word:
                total = total + coef
        return total

    def max_degree(self) -> int:
        return max((len(w) for _, w in self.terms), default=0)

    def record(self) -> dict:
        from . import records

        return records.observable_record(self)

    def __repr__(self):
        degs = sorted({len(w) for _, w in self.terms})
        return f"Observable(d={self.dim}, terms={len(self.terms)}, degrees={degs})"


# ---------------------------------------------------------------------------
# pushforward
# ---------------------------------------------------------------------------


def _bell_rows(jets, n: int):
    """Partial Bell polynomials B_{m,k}(phi', phi'', ...) for m, k <= n."""
    b = [[0j] * (n + 1) for _ in range(n + 1)]
    b[0][0] = 1.0 + 0j
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            acc = 0j
            for j in range(1, m - k + 2):
                acc += math.comb(m - 1, j - 1) * jets[j] * b[m - j][k - 1]
            b[m][k] = acc
    return b


def _map_jet(phi, z: complex, order: int) -> list:
    if isinstance(phi, HolomorphicSeries):
        return phi.jet(z, order)
    return [phi.evaluate(z) if k == 0 else phi.derivative(z, k) for k in range(order + 1)]


def _pushforward_2d(phi, t: HarmonicDistribution) -> HarmonicDistribution:
    if isinstance(phi, Word):
        phi = phi.to_mobius()
    atoms = []
    for atom in t.points:
        za = complex(float(atom.center[0]), float(atom.center[1]))
        c0 = complex(atom.coef)
        comps = _wirtinger_of_ordinary(*atom.alpha)
        top = max((p for (p, q), _ in comps), default=0)
        bot = max((q for (p, q), _ in comps), default=0)
        jets = _map_jet(phi, za, max(top, bot, 1))
        fz = jets[0]
        bells = _bell_rows(jets, max(top, bot))
        for (p, q), w in comps:
            cw = c0 * complex(w)
            for k in range(p + 1):
                bk = bells[p][k] if p else (1.0 if k == 0 else 0.0)
                if not bk:
                    continue
                for l in range(q + 1):
                    bl = bells[q][l] if q else (1.0 if l == 0 else 0.0)
                    if not bl:
                        continue
                    sign = -1.0 if ((p + q) - (k + l)) % 2 else 1.0
                    coef = cw * sign * bk * complex(bl).conjugate()
                    if not coef:
                        continue
                    for ij, ww in _ordinary_of_wirtinger(k, l):
                        atoms.append(((fz.real, fz.imag), ij, coef * complex(ww)))
    return HarmonicDistribution.from_points(2, atoms, truncation=t.truncation)


def _pushforward_high(word: Word, t: HarmonicDistribution) -> HarmonicDistribution:
    d = t.dim
    half = Fraction(d - 2, 2)
    if all(atom.order == 0 for atom in t.points):
        atoms = []
        for atom in t.points:
            x = np.array([float(f) for f in atom.center])
            weight = word.omega(x) ** float(half)
            fx = word.apply(x)
            atoms.append((tuple(fx), atom.alpha, Fraction(weight) * atom.coef))
        return HarmonicDistribution.from_points(d, atoms, truncation=t.truncation)
    if not word.is_affine:
        raise UnsupportedError(
            "derivative atoms push forward only under affine maps for d >= 3"
        )
    m_mat, _ = word.affine_data()
    scale = float(np.linalg.det(m_mat)) ** (1.0 / d)
    weight = Fraction(scale**float(half)) if d > 2 else Fraction(1)
    m_exact = [[Fraction(float(m_mat[i, j])) for j in range(d)] for i in range(d)]
    atoms = []
    for atom in t.points:
        x = np.array([float(f) for f in atom.center])
        fx = tuple(word.apply(x))
        # chain rule: d^alpha(u o phi) = prod_i (sum_j M_{ji} d_j)^{alpha_i} u o phi
        op = Polynomial.one(d)
        for i, k in enumerate(atom.alpha):
            if not k:
                continue
            linear = Polynomial(
                d,
                {
                    tuple(1 if jj == j else 0 for jj in range(d)): m_exact[j][i]
                    for j in range(d)
                },
            )
            for _ in range(k):
                op = op * linear
        for beta, cb in op.coeffs.items():
            atoms.append((fx, beta, atom.coef * cb * weight))
    return HarmonicDistribution.from_points(d, atoms, truncation=t.truncation)


def pushforward(phi, t: HarmonicDistribution) -> HarmonicDistribution:
    """W_phi(T) for point-form T; see the module docstring for the cases."""
    if isinstance(phi, DiskEmbedding):
        phi = phi.map
    if t.points is None:
        raise UnsupportedError("pushforward needs a point-form distribution")
    if isinstance(phi, Word) and phi.dim == t.dim and not phi.generators:
        return t
    if t.dim == 2:
        if not isinstance(phi, (Word, Mobius, HolomorphicSeries)):
            raise TypeError("unrecognized conformal map")
        return _pushforward_2d(phi, t)
    if not isinstance(phi, Word):
        raise DimensionError("maps in d >= 3 are generator words")
    if phi.dim != t.dim:
        raise ValueError("dimension mismatch")
    return _pushforward_high(phi, t)


# ---------------------------------------------------------------------------
# the d = 2 cocycle and its tables
# ---------------------------------------------------------------------------


def _conv2(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    # shift-add when one factor is sparse: exact for degenerate inputs like
    # the identity map, where FFT roundoff would pollute the zero tables
    if min(np.count_nonzero(a), np.count_nonzero(b)) <= 8:
        if np.count_nonzero(b) < np.count_nonzero(a):
            a, b = b, a
        out = np.zeros((n, n), dtype=complex)
        for i, j in zip(*np.nonzero(a)):
            if i < n and j < n:
                out[i:, j:] += a[i, j] * b[: n - i, : n - j]
        return out
    return fftconvolve(a, b)[:n, :n]


def _recip2(s: np.ndarray, n: int) -> np.ndarray:
    """Bivariate power-series reciprocal by graded long division.

    Entry-by-entry back substitution; Newton iteration is unusable here
    because the truncated deficit has l1 norm above 1 and its squares blow
    up long before the rectangle truncation makes them nilpotent.
    """
    s00 = s[0, 0]
    r = np.zeros((n, n), dtype=complex)
    r[0, 0] = 1.0 / s00
    for k in range(n):
        for l in range(n):
            if k == 0 and l == 0:
                continue
            acc = np.sum(s[: k + 1, : l + 1][::-1, ::-1] * r[: k + 1, : l + 1])
            r[k, l] = -acc / s00
    return r


def _div_z_minus_w(f: np.ndarray) -> np.ndarray:
    """Coefficients of f/(z-w) for f divisible by (z-w)."""
    n = f.shape[0]
    g = np.zeros_like(f)
    for m in range(n):
        g[:-1, m] = f[1:, m]
        if m > 0:
            g[:-1, m] += g[1:, m - 1]
    return g


def _log_series_1d(f: np.ndarray) -> np.ndarray:
    """log f as a power series, f[0] != 0, principal branch at the constant."""
    n = f.shape[0]
    fn = f / f[0]
    out = np.zeros(n, dtype=complex)
    out[0] = cmath.log(f[0])
    for i in range(1, n):
        acc = i * fn[i]
        for k in range(1, i):
            acc -= k * out[k] * fn[i - k]
        out[i] = acc / i
    return out


@lru_cache(maxsize=None)
def _ff_weights(n: int, k: int) -> np.ndarray:
    """m!/(m-k)! for m = k..n-1."""
    m = np.arange(k, n, dtype=float)
    out = np.ones(n - k)
    for j in range(k):
        out *= m - j
    return out


def _eval_table(tab: np.ndarray, dz: int, dw: int, a: complex, b: complex) -> complex:
    n = tab.shape[0]
    if dz >= n or dw >= n:
        return 0j
    va = _ff_weights(n, dz) * (a ** np.arange(n - dz))
    vb = _ff_weights(n, dw) * (b ** np.arange(n - dw))
    return complex(va @ tab[dz:, dw:] @ vb)


def _eval_series(vec: np.ndarray, j: int, z: complex) -> complex:
    n = vec.shape[0]
    if j >= n:
        return 0j
    return complex((_ff_weights(n, j) * (z ** np.arange(n - j))) @ vec[j:])


class HarmonicCocycle:
    """H_phi with its coefficient tables; see `cocycle` for construction."""

    __slots__ = ("phi", "trunc", "a_table", "_lz", "_logd", "_logp")

    def __init__(self, phi: HolomorphicSeries, trunc: int):
        self.phi = phi
        self.trunc = trunc
        n = trunc
        c = np.zeros(2 * n + 2, dtype=complex)
        m = min(c.shape[0], phi.coeffs.shape[0])
        c[:m] = phi.coeffs[:m]
        idx = np.add.outer(np.arange(n), np.arange(n)) + 1
        d_tab = c[idx]  # D[n,m] = c_{n+m+1}, exact (phi is a polynomial)
        dp = np.zeros(n, dtype=complex)
        deg = min(n, phi.coeffs.shape[0] - 1)
        dp[:deg] = phi.coeffs[1 : deg + 1] * np.arange(1, deg + 1)
        d_sq = _conv2(d_tab, d_tab, n)
        p_tab = np.outer(dp, dp) - d_sq
        u_tab = _div_z_minus_w(_div_z_minus_w(p_tab))
        r_tab = _recip2(d_sq, n)  # 1/D^2
        a_tab = _conv2(u_tab, r_tab, n)
        # symmetry check on the trusted band
        band = np.add.outer(np.arange(n), np.arange(n)) <= n - 3
        skew = np.abs(a_tab - a_tab.T)[band].max()
        scale = max(1.0, np.abs(a_tab[band]).max())
        if skew > 1e-8 * scale:
            raise AssertionError("cocycle table lost symmetry; increase the truncation")
        a_tab = (a_tab + a_tab.T) / 2
        inv_d = _conv2(d_tab, r_tab, n)
        dz_tab = np.zeros_like(d_tab)
        dz_tab[:-1, :] = d_tab[1:, :] * np.arange(1, n)[:, None]
        lz_tab = _conv2(dz_tab, inv_d, n)
        logd = np.zeros_like(d_tab)
        logd[0, :] = _log_series_1d(d_tab[0, :])
        logd[1:, :] = lz_tab[:-1, :] / np.arange(1, n)[:, None]
        self.a_table = a_tab
        self._lz = lz_tab
        self._logd = logd
        self._logp = _log_series_1d(dp)

    # -- evaluation -------------------------------------------------------

    def _l_deriv(self, j: int, k: int, z: complex, w: complex) -> complex:
        """d_z^j d_w^k of L = log phi'(z) + log phi'(w) - 2 log D(z,w)."""
        val = 0j
        if k == 0:
            val += _eval_series(self._logp, j, z)
        if j == 0:
            val += _eval_series(self._logp, k, w)
        if j >= 1 and k >= 1:
            val -= 2 * _eval_table(self.a_table, j - 1, k - 1, z, w)
        elif j >= 1:
            val -= 2 * _eval_table(self._lz, j - 1, 0, z, w)
        elif k >= 1:
            val -= 2 * _eval_table(self._lz, k - 1, 0, w, z)  # D is symmetric
        else:
            val -= 2 * _eval_table(self._logd, 0, 0, z, w)
        return val

    def h_deriv(self, p1: int, q1: int, p2: int, q2: int, z: complex, w: complex) -> complex:
        """Wirtinger derivative d_z^{p1} d_zbar^{q1} d_w^{p2} d_wbar^{q2} of H."""
        if max(p1, q1, p2, q2) > self.trunc // 2:
            raise TruncationError("cocycle table too small for this derivative order")
        val = 0j
        if q1 == 0 and q2 == 0:
            val += -0.25 * self._l_deriv(p1, p2, z, w)
        if p1 == 0 and p2 == 0:
            val += (-0.25 * self._l_deriv(q1, q2, z, w)).conjugate()
        return val

    def h_value(self, z: complex, w: complex) -> float:
        """H_phi(z, w), continuously extended across the diagonal."""
        return self.h_deriv(0, 0, 0, 0, z, w).real

    def h_grid(self, zs: np.ndarray, ws: np.ndarray) -> np.ndarray:
        """H_phi on the product grid zs x ws; H = -(1/2) Re L."""
        zs = np.asarray(zs, dtype=complex).ravel()
        ws = np.asarray(ws, dtype=complex).ravel()
        powers = np.arange(self.trunc)
        vz = zs[:, None] ** powers[None, :]
        vw = ws[:, None] ** powers[None, :]
        lp_z = vz @ self._logp
        lp_w = vw @ self._logp
        l_full = lp_z[:, None] + lp_w[None, :] - 2 * (vz @ self._logd @ vw.T)
        return -0.5 * l_full.real

    def __repr__(self):
        return f"HarmonicCocycle(trunc={self.trunc})"


def cocycle(phi, trunc: int | None = None) -> HarmonicCocycle:
    """Build the d = 2 cocycle H_phi; requires an injectivity certificate."""
    if isinstance(phi, Word):
        phi = phi.to_mobius()
    if isinstance(phi, Mobius):
        phi = phi.to_series(COCYCLE_TABLE_SIZE)
    if not isinstance(phi, HolomorphicSeries):
        raise TypeError("the cocycle is defined for holomorphic disk maps")
    if phi.injectivity_certificate is None:
        certify_injective(phi)
    if not phi.injectivity_certificate:
        raise DegenerateError(
            "injectivity certificate failed (derivative zero or grid collision)"
        )
    return HarmonicCocycle(phi, trunc or COCYCLE_TABLE_SIZE)


# ---------------------------------------------------------------------------
# kernels and contraction values
# ---------------------------------------------------------------------------


class Kernel:
    """Pairwise contraction kernel on point-form distributions."""

    __slots__ = ("variant", "dim", "cocycle")

    def __init__(self, variant: str, dim: int, cocycle_: HarmonicCocycle | None = None):
        if variant not in ("green", "corrected", "cocycle"):
            raise ValueError("unknown kernel variant")
        if variant != "green" and dim != 2:
            raise DimensionError("corrected and cocycle kernels live in d = 2")
        if variant != "green" and cocycle_ is None:
            raise ValueError("this variant needs a cocycle")
        self.variant = variant
        self.dim = dim
        self.cocycle = cocycle_

    @classmethod
    def green(cls, dim: int) -> "Kernel":
        return cls("green", dim)

    @classmethod
    def corrected(cls, cocycle_: HarmonicCocycle) -> "Kernel":
        return cls("corrected", 2, cocycle_)

    @classmethod
    def cocycle_kernel(cls, cocycle_: HarmonicCocycle) -> "Kernel":
        return cls("cocycle", 2, cocycle_)

    def __repr__(self):
        return f"Kernel({self.variant}, d={self.dim})"


def _dlog(p: int, q: int, u: complex) -> complex:
    """d_z^p d_w^q log(z - w) evaluated at z - w = u, p + q >= 1."""
    return -((-1.0) ** p) * math.factorial(p + q - 1) / u ** (p + q)


def _pair_value_2d(kernel: Kernel, a: complex, p1: int, q1: int, b: complex, p2: int, q2: int) -> complex:
    tot = p1 + q1 + p2 + q2
    val = 0j
    if kernel.variant in ("green", "corrected"):
        u = a - b
        if abs(u) <= MIN_SEPARATION:
            raise SeparationError("coincident centers under a singular kernel")
        if tot == 0:
            val += -math.log(abs(u)) / (2 * math.pi)
        else:
            if q1 == 0 and q2 == 0:
                val += -_dlog(p1, p2, u) / (4 * math.pi)
            if p1 == 0 and p2 == 0:
                val += (-_dlog(q1, q2, u) / (4 * math.pi)).conjugate()
    if kernel.variant == "corrected":
        val += -kernel.cocycle.h_deriv(p1, q1, p2, q2, a, b) / (2 * math.pi)
    elif kernel.variant == "cocycle":
        val += kernel.cocycle.h_deriv(p1, q1, p2, q2, a, b)
    return -val if tot % 2 else val


@lru_cache(maxsize=None)
def _radial_terms(d: int, alpha: tuple, beta: tuple) -> tuple:
    """d_x^alpha d_y^beta ||x-y||^{2-d} as sum of c * v^gamma ||v||^{-s}."""

    def deriv(terms, i, sgn):
        out: dict = {}
        for (gamma, s), c in terms.items():
            c = c * sgn
            if gamma[i]:
                key = (tuple(g - (1 if j == i else 0) for j, g in enumerate(gamma)), s)
                out[key] = out.get(key, Fraction(0)) + c * gamma[i]
            key = (tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma)), s + 2)
            out[key] = out.get(key, Fraction(0)) - c * s
        return {k: v for k, v in out.items() if v}

    terms = {((0,) * d, d - 2): Fraction(1)}
    for i, k in enumerate(alpha):
        for _ in range(k):
            terms = deriv(terms, i, 1)
    for i, k in enumerate(beta):
        for _ in range(k):
            terms = deriv(terms, i, -1)
    return tuple(terms.items())


def _pair_value_high(d: int, a, alpha, b, beta) -> float:
    v = np.array([float(x) for x in a]) - np.array([float(x) for x in b])
    r = float(np.sqrt(v @ v))
    if r <= MIN_SEPARATION:
        raise SeparationError("coincident centers under a singular kernel")
    total = 0.0
    for (gamma, s), c in _radial_terms(d, tuple(alpha), tuple(beta)):
        mono = 1.0
        for vi, gi in zip(v, gamma):
            if gi:
                mono *= vi**gi
        total += float(c) * mono / r**s
    sign = -1.0 if (sum(alpha) + sum(beta)) % 2 else 1.0
    return sign * green_constant(d) * total


def _wirtinger_atoms(t: HarmonicDistribution) -> list:
    out: dict = {}
    for atom in t.points:
        a = complex(float(atom.center[0]), float(atom.center[1]))
        c = complex(atom.coef)
        for (p, q), w in _wirtinger_of_ordinary(*atom.alpha):
            key = (a, p, q)
            out[key] = out.get(key, 0j) + c * complex(w)
    return [(a, p, q, c) for (a, p, q), c in out.items() if c]


def contraction_value(t: HarmonicDistribution, s: HarmonicDistribution, kernel: Kernel):
    """Bilinear kernel pairing of two point-form distributions."""
    if t.points is None or s.points is None:
        raise UnsupportedError("contractions need point-form distributions")
    if t.dim != kernel.dim or s.dim != kernel.dim:
        raise ValueError("dimension mismatch with the kernel")
    if kernel.dim == 2:
        total = 0j
        for a, p1, q1, ca in _wirtinger_atoms(t):
            for b, p2, q2, cb in _wirtinger_atoms(s):
                total += ca * cb * _pair_value_2d(kernel, a, p1, q1, b, p2, q2)
        return total
    total = 0.0
    for at in t.points:
        for bs in s.points:
            total += (
                float(at.coef)
                * float(bs.coef)
                * _pair_value_high(kernel.dim, at.center, at.alpha, bs.center, bs.alpha)
            )
    return total


# ---------------------------------------------------------------------------
# matchings, vacuum states, configuration products
# ---------------------------------------------------------------------------


def _perfect_matchings(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i in range(len(rest)):
        for sub in _perfect_matchings(rest[:i] + rest[i + 1 :]):
            yield ((first, rest[i]),) + sub


def _partial_pairings(items: tuple):
    """All sets of disjoint pairs inside `items`, including the empty set."""
    if len(items) < 2:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in _partial_pairings(rest):
        yield sub
    for i in range(len(rest)):
        for sub in _partial_pairings(rest[:i] + rest[i + 1 :]):
            yield ((first, rest[i]),) + sub


def correlator(f: Observable, kernel: Kernel):
    """(vacuum expectation, number of perfect matchings enumerated)."""
    total = 0j
    count = 0
    for coef, word in f.terms:
        if len(word) % 2:
            continue
        acc = 0j  # the empty word contributes its single empty matching
        for matching in _perfect_matchings(tuple(range(len(word)))):
            count += 1
            prod = 1.0 + 0j
            for i, j in matching:
                prod = prod * contraction_value(word[i], word[j], kernel)
            acc += prod
        total += complex(coef) * acc
    if f.dim >= 3:
        return total.real, count
    return total, count


def vacuum_state(f: Observable, kernel: Kernel):
    """Degree-0 component of exp(d_K) F: the Wick sum over matchings."""
    return correlator(f, kernel)[0]


def correlation_function(f: Observable):
    """Vacuum component of a configuration product, with its term count.

    `rho` leaves one empty-word term per complete cross-matching, so on
    its output this returns the n-point function together with the
    number of Wick matchings that built it.  Words in the normal-ordered
    basis have zero vacuum component, hence no exp(d_K) pass here.
    """
    total = 0j
    count = 0
    for coef, word in f.terms:
        if not word:
            total += complex(coef)
            count += 1
    if f.dim >= 3:
        return total.real, count
    return total, count


def _cross_pairings(na: int, nb: int):
    def rec(i, used):
        if i == na:
            yield ()
            return
        for sub in rec(i + 1, used):
            yield sub
        for j in range(nb):
            if j not in used:
                for sub in rec(i + 1, used | {j}):
                    yield ((i, j),) + sub

    yield from rec(0, frozenset())


def _wick_product(a: Observable, b: Observable, kernel: Kernel) -> Observable:
    terms = []
    for ca, wa in a.terms:
        for cb, wb in b.terms:
            base = _coef_mul(ca, cb)
            for pairing in _cross_pairings(len(wa), len(wb)):
                val = 1.0
                for i, j in pairing:
                    val = val * contraction_value(wa[i], wb[j], kernel)
                used_a = {i for i, _ in pairing}
                used_b = {j for _, j in pairing}
                rest = tuple(t for i, t in enumerate(wa) if i not in used_a) + tuple(
                    t for j, t in enumerate(wb) if j not in used_b
                )
                terms.append((_coef_mul(base, val), rest))
    return Observable(a.dim, terms)


def _cocycle_correction(f: Observable, kern: Kernel) -> Observable:
    """exp(-(2pi)^{-1} d_{H_phi}) F via intra-word pair sums."""
    terms = []
    for coef, word in f.terms:
        idx = tuple(range(len(word)))
        for pairing in _partial_pairings(idx):
            val = 1.0 + 0j
            for i, j in pairing:
                val *= -contraction_value(word[i], word[j], kern) / (2 * math.pi)
            used = {k for ij in pairing for k in ij}
            rest = tuple(t for k, t in enumerate(word) if k not in used)
            terms.append((_coef_mul(coef, val), rest))
    return Observable(f.dim, terms)


def rho(config: DiskConfiguration, *factors: Observable) -> Observable:
    """The configuration product: corrections, pushforwards, contractions."""
    if len(factors) != config.arity:
        raise ValueError("number of observables must match the configuration arity")
    d = config.dim
    if not factors:
        return Observable.scalar(d, 1)
    processed = []
    for emb, f in zip(config.embeddings, factors):
        if not isinstance(f, Observable) or f.dim != d:
            raise ValueError("factors must be observables of the configuration dimension")
        if d == 2:
            for _, word in f.terms:
                for slot in word:
                    if not slot.is_zero_mean():
                        raise ZeroMeanError(
                            "d = 2 factors must be zero-mean in every slot"
                        )
            if isinstance(emb.map, HolomorphicSeries):
                f = _cocycle_correction(f, Kernel.cocycle_kernel(cocycle(emb.map)))
            # Mobius words have H = 0; no correction needed
        processed.append(f.map_words(lambda t, m=emb.map: pushforward(m, t)))
    kernel = Kernel.green(d)
    out = processed[0]
    for nxt in processed[1:]:
        out = _wick_product(out, nxt, kernel)
    return out


# ---------------------------------------------------------------------------
# normalization and the anomaly check
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _norm_factor(dim: int, n: int):
    """Exact word-degree-n normalization factor; rational image of the float
    magnitude so that forward and inverse cancel exactly."""
    if n == 0:
        return Fraction(1)
    if dim == 2:
        mag = Fraction(math.sqrt(4 * math.pi)) ** n
        return GaussianRational(0, 1) ** n * GaussianRational(mag)
    return Fraction(math.sqrt((dim - 2) * surface_area(dim))) ** n


def normalize(f: Observable, direction: str = "forward") -> Observable:
    """Rescale each degree-n word by ((d-2) omega_d)^{n/2} (d >= 3) or
    (4 pi)^{n/2} i^n (d = 2); `inverse` undoes `forward` exactly."""
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    terms = []
    for coef, word in f.terms:
        factor = _norm_factor(f.dim, len(word))
        if direction == "inverse":
            factor = 1 / factor
        exact = coef if isinstance(coef, _EXACT_TYPES) else _to_exact(coef)
        terms.append((exact * factor, word))
    return Observable(f.dim, terms)


def _to_exact(c):
    if isinstance(c, complex):
        return GaussianRational.from_value(c)
    return Fraction(c)


def anomaly_check(phi, f: Observable):
    """Both sides of the corrected-kernel identity; returns (lhs, rhs, residual).

    lhs pairs F with the cocycle-corrected Green kernel; rhs pushes F
    forward and pairs with the plain d = 2 kernel.  For Mobius maps the
    two sides agree to numerical precision.
    """
    if f.dim != 2:
        raise DimensionError("the anomaly identity is a d = 2 statement")
    for _, word in f.terms:
        for slot in word:
            if not slot.is_zero_mean():
                raise ZeroMeanError("the identity holds on zero-mean inputs")
    coc = cocycle(phi)
    lhs = vacuum_state(f, Kernel.corrected(coc))
    pushed = f.map_words(lambda t: pushforward(phi, t))
    rhs = vacuum_state(pushed, Kernel.green(2))
    return lhs, rhs, abs(lhs - rhs)
