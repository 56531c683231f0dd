"""The operad of disjoint conformal disk embeddings.

A DiskEmbedding is a conformal map with a certified image inside the open
unit disk; a DiskConfiguration is an ordered tuple of embeddings with
certified pairwise disjoint images.  Certification is sample-based: the
image of the boundary circle/sphere is sampled, and for d >= 3 (where every
map is a generator word, hence sends spheres to spheres) the samples are
condensed into an exact center/radius fit whose residual is checked.

Composition ``compose_at`` substitutes a configuration into one slot of
another and re-certifies the result; tangent images (zero sampled margin)
are rejected.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import conformal
from .config import BOUNDARY_SAMPLES_2D, BOUNDARY_SAMPLES_3D
from .errors import ContainmentError, DisjointnessError, RadiusError

_BALL_FIT_TOL = 1e-8


@lru_cache(maxsize=None)
def _sphere_points(d: int, count: int) -> np.ndarray:
    """Deterministic, well-spread points on S^{d-1} (rows)."""
    if d == 2:
        ang = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    if d == 3:
        # Fibonacci sphere
        k = np.arange(count)
        z = 1 - (2 * k + 1) / count
        r = np.sqrt(np.maximum(0.0, 1 - z * z))
        th = np.pi * (1 + 5**0.5) * k
        return np.stack([r * np.cos(th), r * np.sin(th), z], axis=1)
    rng = np.random.default_rng(97 + d)
    pts = rng.standard_normal((count, d))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _apply_batch(phi, pts: np.ndarray) -> np.ndarray:
    """Map an (k, d) array of points through any representation."""
    if isinstance(phi, conformal.Word):
        out = pts
        for g in phi.generators:
            if isinstance(g, conformal.Translation):
                out = out + g.a
            elif isinstance(g, conformal.Orthogonal):
                out = out @ g.matrix.T
            elif isinstance(g, conformal.Dilation):
                out = out * g.factor
            else:
                b = g.b
                den = 1.0 - 2.0 * (out @ b) + np.einsum("ij,ij->i", out, out) * (b @ b)
                if np.abs(den).min() <= 1e-14:
                    from .errors import DomainError

                    raise DomainError("special conformal denominator vanished")
                out = (out - np.einsum("ij,ij->i", out, out)[:, None] * b) / den[:, None]
        return out
    z = pts[:, 0] + 1j * pts[:, 1]
    if isinstance(phi, conformal.Mobius):
        m = phi.matrix
        den = m[1, 0] * z + m[1, 1]
        w = (m[0, 0] * z + m[0, 1]) / den
    else:
        if np.abs(z).max() >= phi.radius * (1 + 1e-12):
            raise RadiusError("sample outside the series validity radius")
        w = np.polyval(phi.coeffs[::-1], z)
    return np.stack([w.real, w.imag], axis=1)


def _boundary_samples(phi, dim: int, scale: float) -> np.ndarray:
    count = BOUNDARY_SAMPLES_2D if dim == 2 else BOUNDARY_SAMPLES_3D
    return _apply_batch(phi, scale * _sphere_points(dim, count))


def _map_dim(phi) -> int:
    return phi.dim


def _fit_ball(samples: np.ndarray):
    """Exact center/radius of a sphere through the samples, with residual."""
    y2 = np.einsum("ij,ij->i", samples, samples)
    a = np.concatenate([2 * samples, np.ones((samples.shape[0], 1))], axis=1)
    sol, *_ = np.linalg.lstsq(a, y2, rcond=None)
    center = sol[:-1]
    rad2 = sol[-1] + center @ center
    radius = math.sqrt(max(rad2, 0.0))
    resid = float(np.abs(np.linalg.norm(samples - center, axis=1) - radius).max())
    return center, radius, resid


class DiskEmbedding:
    """A conformal map with certified image inside the open unit disk."""

    __slots__ = ("map", "containment_margin", "_boundary")

    def __init__(self, phi, containment_margin: float | None = None):
        dim = _map_dim(phi)
        if isinstance(phi, conformal.HolomorphicSeries) and phi.radius < 1.0:
            raise RadiusError("an embedding must be defined on the whole unit disk")
        self.map = phi
        # closure boundary, used for disjointness certification
        self._boundary = _boundary_samples(phi, dim, 1.0)
        if containment_margin is None:
            inner = _boundary_samples(phi, dim, 1.0 - 1e-9)
            margin = 1.0 - float(np.linalg.norm(inner, axis=1).max())
            if margin <= 0:
                raise ContainmentError("image is not inside the open unit disk")
            containment_margin = margin
        self.containment_margin = float(containment_margin)

    @property
    def dim(self) -> int:
        return _map_dim(self.map)

    def record(self) -> dict:
        return self.map.record()

    def __repr__(self):
        return f"DiskEmbedding({self.map!r}, margin={self.containment_margin:.3g})"


def make_ball(a, r: float) -> DiskEmbedding:
    """The round embedding x -> r x + a, with its exact margin."""
    center = np.asarray(a, dtype=float)
    r = float(r)
    if r <= 0:
        raise ValueError("ball radius must be positive")
    margin = 1.0 - (r + float(np.linalg.norm(center)))
    if margin <= 0:
        raise ContainmentError("ball does not fit inside the unit disk")
    word = conformal.Word(len(center), [conformal.Dilation(r), conformal.Translation(center)])
    return DiskEmbedding(word, containment_margin=margin)


def _winding_nonzero(loop: np.ndarray, p: np.ndarray) -> bool:
    z = (loop[:, 0] - p[0]) + 1j * (loop[:, 1] - p[1])
    ang = np.angle(np.roll(z, -1) / z)
    return bool(abs(ang.sum() / (2 * np.pi)) > 0.5)


def _interior_point(phi) -> np.ndarray:
    if isinstance(phi, conformal.Word):
        return phi.apply(np.zeros(phi.dim))
    z = phi.evaluate(0j)
    return np.array([z.real, z.imag])


class DiskConfiguration:
    """An ordered tuple of embeddings with certified disjoint images."""

    __slots__ = ("dim", "embeddings", "disjointness_margin")

    def __init__(self, dim, embeddings, disjointness_margin):
        self.dim = dim
        self.embeddings = tuple(embeddings)
        self.disjointness_margin = float(disjointness_margin)

    @property
    def arity(self) -> int:
        return len(self.embeddings)

    def record(self) -> dict:
        return {"arity": self.arity, "embeddings": [e.record() for e in self.embeddings]}

    def __repr__(self):
        return (
            f"DiskConfiguration(arity={self.arity}, "
            f"margin={self.disjointness_margin:.3g})"
        )


def make_configuration(embeddings, dim: int | None = None) -> DiskConfiguration:
    """Certify pairwise disjointness and build the configuration.

    An empty list gives the unique arity-0 configuration (dim then required
    if it cannot be inferred).
    """
    embs = [e if isinstance(e, DiskEmbedding) else DiskEmbedding(e) for e in embeddings]
    if embs:
        dim = embs[0].dim
        if any(e.dim != dim for e in embs):
            raise ValueError("mixed dimensions in one configuration")
    elif dim is None:
        dim = 2
    n = len(embs)
    if n <= 1:
        return DiskConfiguration(dim, embs, math.inf)
    margin = math.inf
    if dim >= 3:
        balls = []
        for e in embs:
            c, rho, resid = _fit_ball(e._boundary)
            if resid > _BALL_FIT_TOL:
                raise AssertionError("image boundary failed the sphere-fit certificate")
            balls.append((c, rho))
        for i in range(n):
            for j in range(i + 1, n):
                ci, ri = balls[i]
                cj, rj = balls[j]
                dist = float(np.linalg.norm(ci - cj))
                gap = dist - ri - rj
                if dist <= abs(ri - rj) or gap <= 0:
                    raise DisjointnessError(
                        f"embeddings {i + 1} and {j + 1} have non-disjoint images"
                    )
                margin = min(margin, gap)
    else:
        loops = [e._boundary for e in embs]
        inner = [_interior_point(e.map) for e in embs]
        for i in range(n):
            for j in range(i + 1, n):
                d2 = np.sqrt(
                    ((loops[i][:, None, :] - loops[j][None, :, :]) ** 2).sum(-1)
                )
                gap = float(d2.min())
                if (
                    gap <= 0
                    or _winding_nonzero(loops[i], inner[j])
                    or _winding_nonzero(loops[j], inner[i])
                ):
                    raise DisjointnessError(
                        f"embeddings {i + 1} and {j + 1} have non-disjoint images"
                    )
                margin = min(margin, gap)
    return DiskConfiguration(dim, embs, margin)


def identity_configuration(dim: int) -> DiskConfiguration:
    return make_configuration([DiskEmbedding(conformal.identity_word(dim))])


def compose_at(outer: DiskConfiguration, i: int, inner: DiskConfiguration) -> DiskConfiguration:
    """Operadic substitution of `inner` into slot i (1-based) of `outer`."""
    if not 1 <= i <= outer.arity:
        raise IndexError(f"slot {i} out of range 1..{outer.arity}")
    if inner.arity and outer.dim != inner.dim:
        raise ValueError("dimension mismatch")
    g = outer.embeddings[i - 1].map
    new_maps = (
        [e.map for e in outer.embeddings[: i - 1]]
        + [conformal.compose(g, f.map) for f in inner.embeddings]
        + [e.map for e in outer.embeddings[i:]]
    )
    return make_configuration([DiskEmbedding(m) for m in new_maps], dim=outer.dim)


def permute(sigma, c: DiskConfiguration) -> DiskConfiguration:
    """Reorder slots: result slot k holds embedding sigma(k) (1-based)."""
    sig = [int(s) for s in sigma]
    if sorted(sig) != list(range(1, c.arity + 1)):
        raise IndexError("not a permutation of 1..n")
    embs = [c.embeddings[s - 1] for s in sig]
    return DiskConfiguration(c.dim, embs, c.disjointness_margin)
