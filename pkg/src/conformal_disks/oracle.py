"""Independent brute-force verification by quadrature.

Everything here deliberately avoids the closed forms used elsewhere: bump
functions stand in for deltas, pairings and contractions are evaluated as
(double) integrals over ball quadrature rules, and the returned values are
compared against the symbolic machinery by the test suites.

The bump family is the standard mollifier c * exp(-1/(1 - (r/eps)^2)),
normalized to unit mass.  Its derivatives stay inside an exact term algebra
(coefficient * (x-a)^gamma * (eps^2 - r^2)^{-s} times the profile), so
derivative bumps and Laplacians are evaluated without finite differencing.

Sign conventions: the Laplacian is the geometer's positive one (-sum of
second partials), matching the polynomial module; with it the Green kernels
satisfy Delta G = delta, and the intertwining check reads
integral K(x,y) f(x) (Delta h)(y) = integral f h.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .config import QUAD_TOL_DOUBLE, QUAD_TOL_SINGLE
from .conformal import HolomorphicSeries, Mobius, Word, series_inverse_point
from .distributions import HarmonicFunction
from .errors import (
    ContainmentError,
    DimensionError,
    SeparationError,
    ToleranceError,
)
from .fock import Kernel
from .harmonic import green_constant, surface_area
from .operad import DiskEmbedding, _fit_ball
from .polynomial import Polynomial

# ---------------------------------------------------------------------------
# quadrature rules on balls
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


class QuadratureRule:
    """Tensor product rule on the unit ball, d in {2, 3}.

    Radial Gauss-Legendre (exact through polynomial degree 2*radial - 1 in
    the radial factor) crossed with a trapezoid circle rule (d = 2) or a
    Gauss-cos(theta) x uniform-phi product sphere rule (d = 3).
    """

    __slots__ = ("dim", "radial", "angular", "nodes", "weights")

    def __init__(self, dim: int, radial: int, angular: int):
        if dim not in (2, 3):
            raise DimensionError("ball quadrature is provided for d = 2 and 3 only")
        if radial < 2 or angular < 2:
            raise ValueError("rule orders must be at least 2")
        self.dim = dim
        self.radial = radial
        self.angular = angular
        xr, wr = _leggauss(radial)
        r = 0.5 * (xr + 1.0)
        wr = 0.5 * wr
        if dim == 2:
            ang = 2 * np.pi * np.arange(angular) / angular
            wa = np.full(angular, 2 * np.pi / angular)
            dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        else:
            xc, wc = _leggauss(angular)
            phis = 2 * np.pi * np.arange(2 * angular) / (2 * angular)
            wphi = 2 * np.pi / (2 * angular)
            st = np.sqrt(1 - xc**2)
            dirs = np.array(
                [
                    [s * math.cos(p), s * math.sin(p), c]
                    for c, s in zip(xc, st)
                    for p in phis
                ]
            )
            wa = np.array([wci * wphi for wci in wc for _ in phis])
        self.nodes = (r[:, None, None] * dirs[None, :, :]).reshape(-1, dim)
        self.weights = (
            (wr * r ** (dim - 1))[:, None] * wa[None, :]
        ).reshape(-1)
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def ball(self, center, radius: float):
        center = np.asarray(center, dtype=float)
        return center + radius * self.nodes, self.weights * radius**self.dim

    def refined(self, factor: float = 1.5) -> "QuadratureRule":
        return QuadratureRule(
            self.dim,
            math.ceil(self.radial * factor),
            math.ceil(self.angular * factor),
        )

    def __repr__(self):
        return f"QuadratureRule(d={self.dim}, radial={self.radial}, angular={self.angular})"


@lru_cache(maxsize=None)
def default_rule(dim: int) -> QuadratureRule:
    # the mollifier profile vanishes to all orders at the support boundary,
    # which slows Gauss-Legendre to root-exponential; radial 32 holds the
    # unit-mass integral to ~1e-9 in d = 3
    return QuadratureRule(2, 20, 40) if dim == 2 else QuadratureRule(3, 32, 8)


# ---------------------------------------------------------------------------
# bump functions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _unit_profile_mass(dim: int) -> float:
    """integral over the unit ball of exp(-1/(1-|t|^2))."""
    x, w = _leggauss(160)
    t = 0.5 * (x + 1.0)
    vals = t ** (dim - 1) * np.exp(-1.0 / (1.0 - t**2))
    return surface_area(dim) * float(0.5 * np.dot(w, vals))


def _term_derivative(terms: dict, i: int, eps2: Fraction, dim: int) -> dict:
    out: dict = {}

    def add(gamma, s, c):
        if c:
            key = (gamma, s)
            out[key] = out.get(key, Fraction(0)) + c

    for (gamma, s), c in terms.items():
        if gamma[i]:
            add(
                tuple(g - (1 if j == i else 0) for j, g in enumerate(gamma)),
                s,
                c * gamma[i],
            )
        up = tuple(g + (1 if j == i else 0) for j, g in enumerate(gamma))
        if s:
            add(up, s + 1, c * 2 * s)
        add(up, s + 2, -2 * eps2 * c)
    return out


class BumpFunction:
    """Normalized mollifier at `center` with support radius `eps`,
    optionally hit by derivatives (see `derivative` and `laplacian`)."""

    __slots__ = ("dim", "center", "eps", "terms", "label")

    def __init__(self, dim: int, center, eps: float, terms=None, label: str = ""):
        self.dim = int(dim)
        self.center = np.asarray(center, dtype=float).reshape(self.dim)
        self.eps = float(eps)
        if self.eps <= 0:
            raise ValueError("bump radius must be positive")
        if float(np.linalg.norm(self.center)) + self.eps >= 1.0:
            raise ContainmentError("bump support must stay inside the open unit disk")
        if terms is None:
            terms = {((0,) * self.dim, 0): Fraction(1)}
        self.terms = dict(terms)
        self.label = label

    @property
    def mass_constant(self) -> float:
        return 1.0 / (_unit_profile_mass(self.dim) * self.eps**self.dim)

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        v = pts - self.center
        eps2 = self.eps**2
        t = eps2 - np.einsum("ij,ij->i", v, v)
        out = np.zeros(pts.shape[0])
        mask = t > eps2 * 1e-8  # beyond this the profile underflows anyway
        if mask.any():
            vm = v[mask]
            tm = t[mask]
            prof = self.mass_constant * np.exp(-eps2 / tm)
            acc = np.zeros(tm.shape[0])
            for (gamma, s), c in self.terms.items():
                mono = np.ones(tm.shape[0])
                for j, gj in enumerate(gamma):
                    if gj:
                        mono = mono * vm[:, j] ** gj
                acc += float(c) * mono * tm ** (-s) if s else float(c) * mono
            out[mask] = prof * acc
        return out[0] if single else out

    def derivative(self, alpha) -> "BumpFunction":
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.dim:
            raise ValueError("multi-index length must match the dimension")
        eps2 = Fraction(self.eps) ** 2
        terms = self.terms
        for i, k in enumerate(alpha):
            for _ in range(k):
                terms = _term_derivative(terms, i, eps2, self.dim)
        return BumpFunction(
            self.dim, self.center, self.eps, terms, label=f"{self.label}d{alpha}"
        )

    def laplacian(self) -> "BumpFunction":
        """The positive Laplacian -sum d_i^2 of this bump."""
        eps2 = Fraction(self.eps) ** 2
        total: dict = {}
        for i in range(self.dim):
            second = _term_derivative(
                _term_derivative(self.terms, i, eps2, self.dim), i, eps2, self.dim
            )
            for key, c in second.items():
                total[key] = total.get(key, Fraction(0)) - c
        return BumpFunction(self.dim, self.center, self.eps, total, label=f"{self.label}lap")

    def __repr__(self):
        return (
            f"BumpFunction(d={self.dim}, center={tuple(self.center)}, "
            f"eps={self.eps}{', ' + self.label if self.label else ''})"
        )


def bump(dim: int, center, eps: float) -> BumpFunction:
    return BumpFunction(dim, center, eps)


# ---------------------------------------------------------------------------
# integrand coercion
# ---------------------------------------------------------------------------


def _poly_batch(poly: Polynomial, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0], dtype=complex)
    for expo, coef in poly.coeffs.items():
        mono = np.ones(pts.shape[0])
        for j, e in enumerate(expo):
            if e:
                mono = mono * pts[:, j] ** e
        out += complex(coef) * mono
    return out


def _as_batch_callable(u, dim: int):
    if isinstance(u, (int, float, complex, Fraction)):
        c = complex(u)
        return lambda pts: np.full(pts.shape[0], c)
    if isinstance(u, Polynomial):
        return lambda pts: _poly_batch(u, pts)
    if isinstance(u, HarmonicFunction):
        parts = list(u.parts.values())
        return lambda pts: sum(
            (_poly_batch(p, pts) for p in parts), np.zeros(pts.shape[0], dtype=complex)
        )
    if isinstance(u, BumpFunction):
        return u.evaluate
    if callable(u):
        return lambda pts: np.asarray([u(p) for p in pts])
    raise TypeError(f"cannot integrate objects of type {type(u).__name__}")


def _real(x):
    x = complex(x)
    return x.real if abs(x.imag) <= 1e-12 * (1 + abs(x.real)) else x


# ---------------------------------------------------------------------------
# single integrals
# ---------------------------------------------------------------------------


def _refinement_ladder(run, rule: QuadratureRule, tol: float, depth: int = 2):
    """Accept the finer of two consecutive rules once they agree within tol,
    escalating the refinement up to `depth` extra levels first."""
    coarse = run(rule)
    rule = rule.refined()
    fine = run(rule)
    for _ in range(depth + 1):
        if abs(fine - coarse) <= tol:
            return fine
        rule = rule.refined()
        coarse, fine = fine, run(rule)
    raise ToleranceError(
        f"quadrature estimate {abs(fine - coarse):.3e} exceeds tolerance {tol:.3e}"
    )


def numeric_pair(f, u, tol: float | None = None, rule: QuadratureRule | None = None):
    """integral of f * u over the support of f, with a refinement-based
    error estimate; raises ToleranceError when the estimate exceeds tol."""
    if not isinstance(f, BumpFunction):
        raise TypeError("numeric_pair integrates over a bump's support")
    tol = QUAD_TOL_SINGLE if tol is None else float(tol)
    rule = rule or default_rule(f.dim)
    uc = _as_batch_callable(u, f.dim)

    def run(rl):
        pts, w = rl.ball(f.center, f.eps)
        return np.dot(w, f.evaluate(pts) * uc(pts))

    return _real(_refinement_ladder(run, rule, tol))


# ---------------------------------------------------------------------------
# kernels on node grids
# ---------------------------------------------------------------------------


def _kernel_grid(kernel: Kernel, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    if kernel.dim == 2:
        zx = xs[:, 0] + 1j * xs[:, 1]
        zy = ys[:, 0] + 1j * ys[:, 1]
        out = np.zeros((xs.shape[0], ys.shape[0]))
        if kernel.variant in ("green", "corrected"):
            dist = np.abs(zx[:, None] - zy[None, :])
            out = -np.log(dist) / (2 * np.pi)
        if kernel.variant == "corrected":
            out = out - kernel.cocycle.h_grid(zx, zy) / (2 * np.pi)
        elif kernel.variant == "cocycle":
            out = kernel.cocycle.h_grid(zx, zy)
        return out
    d2 = (
        np.einsum("ij,ij->i", xs, xs)[:, None]
        + np.einsum("ij,ij->i", ys, ys)[None, :]
        - 2.0 * xs @ ys.T
    )
    dist = np.sqrt(np.maximum(d2, 0.0))
    return green_constant(kernel.dim) * dist ** (2 - kernel.dim)


def numeric_contraction(
    f: BumpFunction,
    g: BumpFunction,
    kernel: Kernel,
    tol: float | None = None,
    rule: QuadratureRule | None = None,
):
    """Tensor-product double integral of K(x,y) f(x) g(y).

    Requires disjoint supports for the singular kernel variants; the gap
    must clear twice the coarse node spacing.
    """
    if f.dim != g.dim or f.dim != kernel.dim:
        raise DimensionError("dimension mismatch")
    tol = QUAD_TOL_DOUBLE if tol is None else float(tol)
    rule = rule or default_rule(f.dim)
    if kernel.variant in ("green", "corrected"):
        gap = float(np.linalg.norm(f.center - g.center)) - f.eps - g.eps
        spacing = 2.0 * max(f.eps, g.eps) / rule.radial
        if gap <= 2.0 * spacing:
            raise SeparationError(
                "supports too close for the singular kernel "
                f"(gap {gap:.3e}, need > {2 * spacing:.3e})"
            )

    def run(rl):
        xf, wf = rl.ball(f.center, f.eps)
        xg, wg = rl.ball(g.center, g.eps)
        lf = wf * f.evaluate(xf)
        lg = wg * g.evaluate(xg)
        # row blocks keep the kernel grid bounded (~33 MB) on refined rules
        step = max(1, (1 << 22) // xg.shape[0])
        return sum(
            float(lf[i : i + step] @ _kernel_grid(kernel, xf[i : i + step], xg) @ lg)
            for i in range(0, xf.shape[0], step)
        )

    return _refinement_ladder(run, rule, tol)


# ---------------------------------------------------------------------------
# singular double integrals and the intertwining check
# ---------------------------------------------------------------------------


def _sphere_dirs(dim: int, ang: int):
    """Unit directions with weights summing to the sphere area."""
    if dim == 2:
        angles = 2 * np.pi * np.arange(ang) / ang
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        return dirs, np.full(ang, 2 * np.pi / ang)
    xc, wc = _leggauss(max(4, ang // 4))
    phis = 2 * np.pi * np.arange(ang) / ang
    st = np.sqrt(1 - xc**2)
    dirs = np.array(
        [[s * math.cos(p), s * math.sin(p), c] for c, s in zip(xc, st) for p in phis]
    )
    return dirs, np.repeat(wc, ang) * (2 * np.pi / ang)


def _green_radial(dim: int, r: np.ndarray) -> np.ndarray:
    if dim == 2:
        return -np.log(r) / (2 * np.pi)
    return green_constant(dim) * r ** (2 - dim)


def _polar_potential(f: BumpFunction, y: np.ndarray, level: int) -> float:
    """Green potential of f at a single target inside supp f, by a polar
    rule centered at y whose radial measure absorbs the singularity.

    Targets near the support edge see the bump through grazing rays and
    need noticeably higher orders than central ones.
    """
    d = f.dim
    edge = float(np.linalg.norm(y - f.center)) > 0.85 * f.eps
    if d == 2:
        cells, gl, ang = [(20, 12, 64), (24, 16, 96), (28, 20, 160)][level + edge]
        his = 0.5 ** np.arange(cells)
        los = his / 2.0
    else:
        # r^{d-1} K ~ r: no singularity left, a single panel suffices
        gl, ang = [(48, 32), (80, 56), (128, 96)][level + edge]
        his = np.array([1.0])
        los = np.array([0.0])
    dirs, wdir = _sphere_dirs(d, ang)
    xg, wg = _leggauss(gl)
    rr = (los[:, None] + (his - los)[:, None] * 0.5 * (xg + 1.0)[None, :]).ravel()
    wr = ((his - los)[:, None] * 0.5 * wg[None, :]).ravel()
    radius = float(np.linalg.norm(y - f.center)) + f.eps
    r = radius * rr
    pts = y[None, None, :] + r[:, None, None] * dirs[None, :, :]
    vals = f.evaluate(pts.reshape(-1, d)).reshape(r.shape[0], dirs.shape[0])
    return float(
        np.einsum("i,i,ij,j->", radius * wr * r ** (d - 1), _green_radial(d, r), vals, wdir)
    )


def _potential_batch(kernel: Kernel, f: BumpFunction, ys: np.ndarray, level: int) -> np.ndarray:
    """F(y) = integral K(x, y) f(x) dx for a batch of targets y.

    f is a plain mollifier, so its Green potential is smooth everywhere.
    Targets outside supp f use the bump-adapted ball rule (the flat vanishing
    of f at its support boundary tames the kernel even at tiny gaps).
    Inside the support the potential is a radial function of |y - center|
    (the kernel only sees distances), so it is sampled along one ray with
    polar rules and interpolated by a cubic spline.
    """
    d = f.dim
    out = np.zeros(ys.shape[0])
    dist = np.linalg.norm(ys - f.center, axis=1)
    singular = kernel.variant in ("green", "corrected")
    # strictly outside the support the profile underflows before any rule
    # node can approach the kernel singularity, so the plain rule is safe
    cut = f.eps
    inner = (dist < cut) if singular else np.zeros(ys.shape[0], dtype=bool)

    if d == 2:
        rl = default_rule(2) if level == 0 else default_rule(2).refined()
    else:
        # targets can sit arbitrarily close to the support boundary, where
        # the kernel scale shrinks to the profile floor (~0.02 eps)
        rl = QuadratureRule(3, 48, 12) if level == 0 else QuadratureRule(3, 64, 16)
    xs, wx = rl.ball(f.center, f.eps)
    lf = wx * f.evaluate(xs)
    if singular and (~inner).any():
        far = ys[~inner]
        step = max(1, (1 << 22) // xs.shape[0])
        out[~inner] = np.concatenate(
            [
                _kernel_grid(Kernel.green(d), far[i : i + step], xs) @ lf
                for i in range(0, far.shape[0], step)
            ]
        )

    if inner.any():
        from scipy.interpolate import CubicSpline

        m = 72 if level == 0 else 108
        ts = cut * np.linspace(0.0, 1.0, m)
        ray = np.zeros(d)
        ray[0] = 1.0
        samples = np.array(
            [_polar_potential(f, f.center + t * ray, level) for t in ts]
        )
        out[inner] = CubicSpline(ts, samples)(dist[inner])

    if kernel.variant != "green":
        # the cocycle part is smooth; the ordinary rule covers all targets
        zy = ys[:, 0] + 1j * ys[:, 1]
        zx = xs[:, 0] + 1j * xs[:, 1]
        hpart = kernel.cocycle.h_grid(zy, zx) @ lf
        out = out - hpart / (2 * np.pi) if kernel.variant == "corrected" else hpart
    return out


def verify_cg_intertwine(
    f: BumpFunction, h: BumpFunction, kernel: Kernel, tol: float | None = None
) -> float:
    """Residual of integral K(x,y) f(x) (Delta h)(y) dy dx = integral f h.

    Overlapping supports are the interesting case.  The x-integral is done
    first: the potential K * f is smooth, so the outer integral against the
    (sharply peaked) Delta h is an ordinary bump-adapted quadrature, only
    needing extra radial order.
    """
    if f.dim != h.dim or f.dim != kernel.dim:
        raise DimensionError("dimension mismatch")
    tol = QUAD_TOL_DOUBLE if tol is None else float(tol)
    lap = h.laplacian()

    def lhs_run(level):
        if f.dim == 2:
            rl = QuadratureRule(2, 48, 40) if level == 0 else QuadratureRule(2, 72, 64)
        else:
            rl = QuadratureRule(3, 48, 12) if level == 0 else QuadratureRule(3, 72, 16)
        ys, wy = rl.ball(h.center, h.eps)
        return float(np.dot(wy * lap.evaluate(ys), _potential_batch(kernel, f, ys, level)))

    lhs = lhs_run(0)
    lhs_fine = lhs_run(1)
    if abs(lhs - lhs_fine) > tol:
        raise ToleranceError(
            f"singular quadrature estimate {abs(lhs - lhs_fine):.3e} exceeds {tol:.3e}"
        )
    pts, w = default_rule(f.dim).refined().ball(h.center, h.eps)
    rhs = float(np.dot(w, f.evaluate(pts) * h.evaluate(pts)))
    return abs(lhs_fine - rhs)


# ---------------------------------------------------------------------------
# pushforward change-of-variables checks
# ---------------------------------------------------------------------------


class PushforwardCheck(NamedTuple):
    pairing_residual: float
    mass_residual: float


def _invert_map(phi, pts: np.ndarray, dim: int) -> np.ndarray:
    if isinstance(phi, Word):
        inv = phi.inverse()
        return np.array([inv.apply(p) for p in pts])
    if isinstance(phi, Mobius):
        inv = phi.inverse()
        return np.array([inv.apply(p) for p in pts])
    if isinstance(phi, HolomorphicSeries):
        zs = pts[:, 0] + 1j * pts[:, 1]
        out = np.empty_like(pts)
        z0 = 0j
        for i, wv in enumerate(zs):
            z0 = series_inverse_point(phi, wv, z0)
            out[i] = (z0.real, z0.imag)
        return out
    raise TypeError("unrecognized conformal map")


def _omega_batch(phi, pts: np.ndarray) -> np.ndarray:
    return np.array([phi.omega(p) for p in pts])


def verify_pushforward_integral(
    phi, f, h: BumpFunction | None = None, tol: float | None = None
) -> PushforwardCheck:
    """Change-of-variables checks for the density pushforward.

    W(f)(x) = Omega(phi^{-1}x)^{-(d+2)/2} f(phi^{-1}x) must satisfy
    integral W(f) * Wtilde(h) = integral f * h (test functions carried with
    the complementary weight Omega^{-(d-2)/2}).  The mass residual compares
    integral W(f) dx against integral Omega^{(d-2)/2} f dy; in d = 2 the
    weight drops out, so the pushforward preserves total mass and in
    particular zero mean.  `f` may be a list of (weight, bump) pairs, so
    zero-mean combinations can be checked directly.
    """
    if isinstance(phi, DiskEmbedding):
        phi = phi.map
    parts = [(1.0, f)] if isinstance(f, BumpFunction) else [(float(c), b) for c, b in f]
    dim = parts[0][1].dim
    tol = QUAD_TOL_SINGLE if tol is None else float(tol)
    if h is None:
        # concentric with the first part: an offset test bump would plant
        # its flat support boundary inside the image rule's interior and
        # cost several digits of radial accuracy
        base = parts[0][1]
        h = BumpFunction(dim, base.center, base.eps)
    rule = default_rule(dim).refined()
    half = (dim - 2) / 2.0

    pair_lhs = 0.0
    mass_out = 0.0
    for coef, fb in parts:
        # image region: fit the mapped support boundary.  Conformal images
        # of balls are balls (exactly in d >= 3 and for Mobius maps, nearly
        # so for the series maps used here); padding the region instead
        # would pull the profile's flat boundary into the rule's interior
        # and visibly degrade the radial quadrature.
        boundary = fb.center + fb.eps * _sphere_dirs(dim, 32 * (dim - 1))[0]
        images = np.array([phi.apply(p) for p in boundary])
        fc, _, _ = _fit_ball(images)
        rad = float(np.linalg.norm(images - fc, axis=1).max()) + 1e-9
        pts, w = rule.ball(fc, rad)
        pre = _invert_map(phi, pts, dim)
        om = _omega_batch(phi, pre)
        wf = om ** (-(dim + 2) / 2.0) * fb.evaluate(pre)
        wh = om ** (-half) * h.evaluate(pre) if half else h.evaluate(pre)
        pair_lhs += coef * float(np.dot(w, wf * wh))
        mass_out += coef * float(np.dot(w, wf))

    pair_rhs = 0.0
    mass_in = 0.0
    for coef, fb in parts:
        pts, w = rule.ball(fb.center, fb.eps)
        vals = fb.evaluate(pts)
        pair_rhs += coef * float(np.dot(w, vals * h.evaluate(pts)))
        if half:
            vals = vals * _omega_batch(phi, pts) ** half
        mass_in += coef * float(np.dot(w, vals))
    return PushforwardCheck(abs(pair_lhs - pair_rhs), abs(mass_out - mass_in))
