"""Invariant suites behind the `verify` command.

Each suite runs a fixed, seed-determined list of checks and returns one
report record per check: {"check", "lhs", "rhs", "residual", "tolerance",
"pass"}.  Enumeration order and all randomness derive from RunConfig, so
identical configurations reproduce identical report streams byte for byte.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import numpy as np

from . import conformal as cf
from . import fock
from .config import RunConfig
from .distributions import delta_at, derivative_delta, pair
from .harmonic import (
    addition_coefficient,
    dim_harm,
    gegenbauer,
    green_expansion_partial,
    green_kernel,
    laplacian_nullity,
    orthonormal_basis,
    sphere_inner,
)
from .operad import compose_at, identity_configuration, make_ball, make_configuration, permute
from .oracle import (
    BumpFunction,
    numeric_contraction,
    numeric_pair,
    verify_cg_intertwine,
    verify_pushforward_integral,
)
from .polynomial import Polynomial
from .records import report_record

SELECTORS = ("harmonic", "cocycle", "contraction", "operad", "anomaly", "all")

__all__ = ["SELECTORS", "run_suite", "suite_passed"]


def _rng(cfg: RunConfig, label: str) -> random.Random:
    # string seeds hash deterministically in random.Random (unlike hash())
    return random.Random(f"{cfg.seed}:{label}")


class _Reporter:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.records: list[dict] = []

    def check(self, name: str, lhs, rhs, tol: float) -> None:
        residual = abs(lhs - rhs)
        self.records.append(
            report_record(f"{self.prefix}/{name}", lhs, rhs, residual, tol, residual <= tol)
        )

    def margin(self, name: str, value: float) -> None:
        # positivity checks: residual is the shortfall below zero
        self.records.append(
            report_record(f"{self.prefix}/{name}", value, 0.0, max(0.0, -value), 0.0, value > 0)
        )


# ---------------------------------------------------------------------------
# random inputs (all seed-determined)
# ---------------------------------------------------------------------------


def random_mobius(rng: random.Random, scale: tuple = (0.5, 0.85)) -> cf.Mobius:
    center = rng.uniform(0.0, 0.55) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    return cf.mobius_from_disk_data(
        center, rng.uniform(*scale), rng.uniform(0, 2 * math.pi)
    )


def random_series(rng: random.Random, trunc: int = 12) -> cf.HolomorphicSeries:
    """Non-Mobius injective series with image inside the unit disk."""
    c = [0j] * (trunc + 1)
    c[0] = complex(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05))
    c[1] = rng.uniform(0.35, 0.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    budget = 0.3 * abs(c[1])  # sum k|c_k| < |c_1| certifies injectivity
    for k in range(2, min(6, trunc + 1)):
        mag = rng.uniform(0.1, 0.5) * budget / (k * k)
        c[k] = mag * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    return cf.HolomorphicSeries(c)


def random_word(rng: random.Random, dim: int) -> cf.Word:
    gens = [cf.Dilation(rng.uniform(0.3, 0.5))]
    if rng.random() < 0.5:
        b = [rng.uniform(-0.1, 0.1) for _ in range(dim)]
        gens.append(cf.SpecialConformal(b))
    shift = [rng.uniform(-0.3, 0.3) for _ in range(dim)]
    gens.append(cf.Translation(shift))
    w = cf.Word(dim, gens)
    # keep the image inside the disk: shrink the translation if needed
    edge = max(np.linalg.norm(w.apply(p)) for p in np.eye(dim).tolist() + (-np.eye(dim)).tolist())
    if edge >= 0.95:
        gens[-1] = cf.Translation([0.6 * s for s in shift])
        w = cf.Word(dim, gens)
    return w


def random_harmonic(rng: random.Random, d: int, max_deg: int) -> Polynomial:
    total = Polynomial.zero(d)
    for n in range(max_deg + 1):
        for u in orthonormal_basis(d, n).orthogonal:
            total = total + u.scale(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    return total


def _disjoint_centers(rng: random.Random, dim: int, count: int, radius: float):
    pts: list = []
    while len(pts) < count:
        p = [rng.uniform(-0.6, 0.6) for _ in range(dim)]
        if math.sqrt(sum(x * x for x in p)) + radius >= 0.9:
            continue
        if all(math.dist(p, q) > 2.5 * radius for q in pts):
            pts.append(p)
    return pts


def random_ball_config(rng: random.Random, dim: int, arity: int, radius: float = 0.12):
    return make_configuration([make_ball(p, radius) for p in _disjoint_centers(rng, dim, arity, radius)])


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_harmonic(cfg: RunConfig) -> list[dict]:
    rep = _Reporter("harmonic")
    rng = _rng(cfg, "harmonic")

    for d in (2, 3, 4, 5):
        for n in range(11):
            rep.check(f"dim-count/d{d}-n{n}", dim_harm(d, n), laplacian_nullity(d, n), 0.0)

    for d in (2, 3, 4):
        for n in range(1, 7):
            basis = orthonormal_basis(d, n)
            gram = basis.gram_float()
            rep.check(
                f"gram-identity/d{d}-n{n}",
                float(np.abs(gram - np.eye(basis.size)).max()),
                0.0,
                1e-12,
            )
            worst = max(
                float(max((abs(float(c)) for c in u.laplacian().coeffs.values()), default=0.0))
                for u in basis.orthogonal
            )
            rep.check(f"basis-harmonic/d{d}-n{n}", worst, 0.0, 0.0)

    for d in (2, 3, 4):
        n, m = 2, 4
        p = orthonormal_basis(d, n).orthogonal[0]
        q = orthonormal_basis(d, m).orthogonal[0]
        rep.check(f"degree-orthogonality/d{d}", float(sphere_inner(p, q)), 0.0, 0.0)

    pairs = max(5, cfg.samples // 2)
    for d in (3, 4):
        for n in range(9):
            worst = 0.0
            for _ in range(pairs):
                a = np.array([rng.uniform(-1, 1) for _ in range(d)])
                x = np.array([rng.uniform(-1, 1) for _ in range(d)])
                ra, rx = np.linalg.norm(a), np.linalg.norm(x)
                t = float(a @ x) / (ra * rx)
                lhs = zonal_value(d, n, a, x)
                rhs = (ra * rx) ** n * float(gegenbauer(d, n, Fraction(t))) / float(
                    addition_coefficient(d, n)
                )
                scale = max(1.0, abs(rhs))
                worst = max(worst, abs(lhs - rhs) / scale)
            rep.check(f"addition-formula/d{d}-n{n}", worst, 0.0, 1e-10)

    # d = 3 has c_{3,n}*A_{3,n} = 1: the tail is purely geometric.  d = 2
    # carries a 1/n damping.  Higher d grows polynomially in n and a
    # two-point rate estimate would need much deeper partial sums.
    for d in (2, 3):
        for ratio in (0.3, 0.5, 0.7):
            rate = expansion_decay_rate(d, ratio)
            rep.check(f"expansion-decay/d{d}-r{ratio}", rate, ratio, 0.1 * ratio)

    for d in (2, 3, 4):
        for k in range(3):
            a = tuple(Fraction(rng.randint(-3, 3), 10) for _ in range(d))
            u = random_harmonic(rng, d, 6)
            diff = pair(delta_at(a), u) - u.evaluate(a)
            rep.check(f"delta-reproduction/d{d}-case{k}", float(abs(complex(diff))), 0.0, 0.0)

    return rep.records


def zonal_value(d: int, n: int, a: np.ndarray, x: np.ndarray) -> float:
    """Sum_k Y_k(a) Y_k(x) over the orthonormal basis, in floats."""
    basis = orthonormal_basis(d, n)
    return sum(
        basis.evaluate_orthonormal(k, a) * basis.evaluate_orthonormal(k, x)
        for k in range(basis.size)
    )


def expansion_decay_rate(d: int, ratio: float) -> float:
    """Measured geometric rate of the Green partial-sum error.

    Colinear points keep every expansion term positive; off-axis the
    zonal factor oscillates and two-point rate estimates jitter.
    """
    x = np.zeros(d)
    x[0] = 0.8
    y = np.zeros(d)
    y[0] = 0.8 * ratio
    exact = green_kernel(d, x, y)
    errs = [abs(green_expansion_partial(d, x, y, deg) - exact) for deg in (8, 16)]
    if errs[1] == 0:
        return ratio
    return (errs[1] / errs[0]) ** (1.0 / 8.0)


def suite_cocycle(cfg: RunConfig) -> list[dict]:
    rep = _Reporter("cocycle")
    rng = _rng(cfg, "cocycle")
    cases = max(3, cfg.samples // 4)

    for k in range(cases):
        mob = random_mobius(rng)
        coc = fock.cocycle(mob)
        rep.check(
            f"mobius-table/case{k}", float(np.abs(coc.a_table[:25, :25]).max()), 0.0, 1e-9
        )
        zs = np.array([rng.uniform(-0.55, 0.55) + 1j * rng.uniform(-0.55, 0.55) for _ in range(10)])
        ws = zs[::-1] * 0.9 + 0.03j
        rep.check(
            f"mobius-grid/case{k}", float(np.abs(coc.h_grid(zs, ws)).max()), 0.0, 1e-9
        )

    ident = fock.cocycle(cf.HolomorphicSeries([0, 1, 0, 0]))
    rep.check("identity-table", float(np.abs(ident.a_table).max()), 0.0, 0.0)

    for k in range(cases):
        phi, psi = random_series(rng), random_series(rng)
        coc_phi, coc_psi = fock.cocycle(phi), fock.cocycle(psi)
        # head-room: the composite needs terms well past either input's
        # truncation before its own tail drops below the check tolerance
        coc_comp = fock.cocycle(cf.compose(phi.with_truncation(40), psi))
        worst = 0.0
        for _ in range(20):
            z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
            w = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
            lhs = coc_comp.h_value(z, w)
            rhs = coc_psi.h_value(z, w) + coc_phi.h_value(psi.evaluate(z), psi.evaluate(w))
            worst = max(worst, abs(lhs - rhs))
        rep.check(f"composition-identity/case{k}", worst, 0.0, 1e-9)

    for k in range(max(2, cases // 2)):
        phi = random_series(rng)
        coc = fock.cocycle(phi)
        diag = [sum(coc.a_table[i, deg - i] for i in range(deg + 1)) for deg in range(17)]
        worst = 0.0
        for _ in range(25):
            z = rng.uniform(0.05, 0.6) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            sval = cf.schwarzian(phi, z).value / 6
            worst = max(worst, abs(sval - sum(c * z**j for j, c in enumerate(diag))))
        rep.check(f"schwarzian-diagonal/case{k}", worst, 0.0, 1e-8)
        asym = float(np.abs(coc.a_table - coc.a_table.T).max())
        rep.check(f"table-symmetry/case{k}", asym, 0.0, 1e-12)

    return rep.records


def suite_contraction(cfg: RunConfig) -> list[dict]:
    rep = _Reporter("contraction")
    rng = _rng(cfg, "contraction")

    for d in (2, 3):
        for k in range(2):
            (p, q) = _disjoint_centers(rng, d, 2, 0.08)
            f = BumpFunction(d, p, 0.08)
            g = BumpFunction(d, q, 0.08)
            kern = fock.Kernel.green(d)
            closed = fock.contraction_value(delta_at(tuple(map(Fraction, p))),
                                            delta_at(tuple(map(Fraction, q))), kern)
            oracle = numeric_contraction(f, g, kern, tol=cfg.tol_double)
            rep.check(f"bump-vs-closed/d{d}-case{k}", oracle, float(closed.real if isinstance(closed, complex) else closed), cfg.tol_double)

    (p, q) = _disjoint_centers(rng, 2, 2, 0.08)
    f = BumpFunction(2, p, 0.08).derivative((1, 0))
    g = BumpFunction(2, q, 0.08)
    kern = fock.Kernel.green(2)
    closed = fock.contraction_value(
        derivative_delta(tuple(map(Fraction, p)), (1, 0)),
        delta_at(tuple(map(Fraction, q))),
        kern,
    )
    oracle = numeric_contraction(f, g, kern, tol=1e-3)
    rep.check("bump-vs-closed/derivative", oracle, float(complex(closed).real), 1e-3)

    for d in (2, 3):
        a = tuple(Fraction(rng.randint(-3, 3), 10) for _ in range(d))
        u = random_harmonic(rng, d, 4)
        got = numeric_pair(BumpFunction(d, [float(x) for x in a], 0.05), u, tol=cfg.tol_single)
        rep.check(f"delta-reproduction/d{d}", got, float(u.evaluate(a)), 10 * cfg.tol_single)

    phi = random_series(rng)
    coc = fock.cocycle(phi)
    (p, q) = _disjoint_centers(rng, 2, 2, 0.07)
    for variant, kern in (("corrected", fock.Kernel.corrected(coc)),
                          ("cocycle", fock.Kernel.cocycle_kernel(coc))):
        closed = fock.contraction_value(delta_at(tuple(map(Fraction, p))),
                                        delta_at(tuple(map(Fraction, q))), kern)
        oracle = numeric_contraction(BumpFunction(2, p, 0.07), BumpFunction(2, q, 0.07),
                                     kern, tol=cfg.tol_double)
        rep.check(f"kernel-variant/{variant}", oracle, float(complex(closed).real), cfg.tol_double)

    f = BumpFunction(2, [-0.35, 0.1], 0.12)
    h = BumpFunction(2, [0.4, -0.05], 0.1)
    resid = verify_cg_intertwine(f, h, fock.Kernel.green(2), tol=cfg.tol_double)
    rep.check("green-inverts-laplacian", resid, 0.0, cfg.tol_double)

    mob = random_mobius(rng, scale=(0.5, 0.7))
    chk = verify_pushforward_integral(mob, BumpFunction(2, [0.1, -0.2], 0.1))
    rep.check("pushforward-pairing/d2", chk.pairing_residual, 0.0, cfg.tol_single)
    rep.check("pushforward-mass/d2", chk.mass_residual, 0.0, cfg.tol_single)

    w = random_word(rng, 3)
    chk = verify_pushforward_integral(w, BumpFunction(3, [0.1, 0.0, -0.1], 0.1))
    rep.check("pushforward-pairing/d3", chk.pairing_residual, 0.0, cfg.tol_single)
    rep.check("pushforward-mass/d3", chk.mass_residual, 0.0, cfg.tol_single)

    return rep.records


def _embedding_residual(c1, c2) -> float:
    worst = 0.0
    for e1, e2 in zip(c1.embeddings, c2.embeddings):
        worst = max(worst, float(np.abs(e1._boundary - e2._boundary).max()))
    return worst


def suite_operad(cfg: RunConfig) -> list[dict]:
    rep = _Reporter("operad")
    rng = _rng(cfg, "operad")
    cases = max(3, cfg.samples // 5)

    for k in range(cases):
        dim = 2 if k % 2 == 0 else 3
        c = random_ball_config(rng, dim, 3)
        rep.margin(f"margins/disjoint-case{k}", c.disjointness_margin)
        rep.margin(f"margins/contained-case{k}", min(e.containment_margin for e in c.embeddings))

        ident = identity_configuration(dim)
        left = compose_at(ident, 1, c)
        rep.check(f"identity-law/left-case{k}", _embedding_residual(left, c), 0.0, 1e-12)
        right = c
        for i in range(c.arity):
            right = compose_at(right, i + 1, ident)
        rep.check(f"identity-law/right-case{k}", _embedding_residual(right, c), 0.0, 1e-12)

    for k in range(cases):
        dim = 2 if k % 2 == 0 else 3
        outer = random_ball_config(rng, dim, 2)
        mid = random_ball_config(rng, dim, 2)
        inner = random_ball_config(rng, dim, 2)
        lhs = compose_at(compose_at(outer, 1, mid), 1, inner)
        rhs = compose_at(outer, 1, compose_at(mid, 1, inner))
        rep.check(f"associativity/case{k}", _embedding_residual(lhs, rhs), 0.0, 1e-10)

    c = random_ball_config(rng, 3, 3)
    sigma = (2, 3, 1)
    cycled = permute(sigma, permute(sigma, permute(sigma, c)))
    rep.check("permutation-order3", _embedding_residual(cycled, c), 0.0, 0.0)

    for k in range(min(3, cases)):
        outer = random_ball_config(rng, 3, 2, radius=0.18)
        inner = random_ball_config(rng, 3, 2, radius=0.2)
        factors = []
        for _ in range(3):
            a = tuple(Fraction(rng.randint(-2, 2), 10) for _ in range(3))
            b = tuple(Fraction(rng.randint(-2, 2), 10) for _ in range(3))
            factors.append(fock.Observable.from_word((delta_at(a), delta_at(b))))
        glued = compose_at(outer, 1, inner)
        kern = fock.Kernel.green(3)
        lhs = fock.vacuum_state(fock.rho(glued, factors[0], factors[1], factors[2]), kern)
        nested = fock.rho(inner, factors[0], factors[1])
        rhs = fock.vacuum_state(fock.rho(outer, nested, factors[2]), kern)
        rep.check(f"algebra-compatibility/case{k}", lhs, rhs, 1e-8)

    return rep.records


def _zero_mean_word(rng: random.Random, slots: int) -> tuple:
    word = []
    for _ in range(slots):
        a = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
        if rng.random() < 0.5:
            word.append(derivative_delta(a, (1, 0) if rng.random() < 0.5 else (0, 1)))
        else:
            b = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
            word.append(delta_at(a) - delta_at(b))
    return tuple(word)


def suite_anomaly(cfg: RunConfig) -> list[dict]:
    rep = _Reporter("anomaly")
    rng = _rng(cfg, "anomaly")
    cases = max(3, cfg.samples // 5)

    kern3 = fock.Kernel.green(3)
    for k in range(cases):
        word = tuple(
            delta_at(tuple(Fraction(rng.randint(-4, 4), 10) for _ in range(3)))
            for _ in range(2 * rng.randint(1, 2))
        )
        f = fock.Observable.from_word(word)
        phi = random_word(rng, 3)
        config = make_configuration([cf_embedding(phi)])
        lhs = fock.vacuum_state(fock.rho(config, f), kern3)
        rhs = fock.vacuum_state(f, kern3)
        rep.check(f"invariance-d3/case{k}", lhs, rhs, 1e-9)

    for k in range(cases):
        phi = random_series(rng)
        f = fock.Observable.from_word(_zero_mean_word(rng, 2))
        lhs, rhs, resid = fock.anomaly_check(phi, f)
        rep.check(f"corrected-state-d2/case{k}", complex(lhs), complex(rhs), 1e-8)

    kern2 = fock.Kernel.green(2)
    for k in range(max(2, cases // 2)):
        mob = random_mobius(rng)
        f = fock.Observable.from_word(_zero_mean_word(rng, 2))
        pushed = f.map_words(lambda t: fock.pushforward(mob, t))
        lhs = fock.vacuum_state(pushed, kern2)
        rhs = fock.vacuum_state(f, kern2)
        rep.check(f"mobius-uncorrected/case{k}", complex(lhs), complex(rhs), 1e-9)

    return rep.records


def cf_embedding(phi):
    from .operad import DiskEmbedding

    return DiskEmbedding(phi)


_SUITES = {
    "harmonic": suite_harmonic,
    "cocycle": suite_cocycle,
    "contraction": suite_contraction,
    "operad": suite_operad,
    "anomaly": suite_anomaly,
}


def run_suite(selector: str, cfg: RunConfig | None = None) -> list[dict]:
    """Run one selector (or `all`) and return its report records."""
    cfg = cfg or RunConfig()
    if selector == "all":
        out: list[dict] = []
        for name in ("harmonic", "cocycle", "contraction", "operad", "anomaly"):
            out.extend(_SUITES[name](cfg))
        return out
    if selector not in _SUITES:
        raise ValueError(f"unknown suite selector {selector!r}")
    return _SUITES[selector](cfg)


def suite_passed(records: list[dict]) -> bool:
    return all(r["pass"] for r in records)
