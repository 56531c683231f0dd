"""Harmonic polynomial spaces, zonal kernels, and the Green expansion."""
import math
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.special

from conformal_disks import harmonic as harm
from conformal_disks.errors import DimensionError
from conformal_disks.polynomial import Polynomial

from conftest import rand_fraction


def test_dim_harm_closed_forms():
    # d=2: 1, 2, 2, ...; d=3: 2n+1; d=4: (n+1)^2; d=5: (n+1)(n+2)(2n+3)/6
    assert [harm.dim_harm(2, n) for n in range(6)] == [1, 2, 2, 2, 2, 2]
    for n in range(11):
        assert harm.dim_harm(3, n) == 2 * n + 1
        assert harm.dim_harm(4, n) == (n + 1) ** 2
        assert harm.dim_harm(5, n) == (n + 1) * (n + 2) * (2 * n + 3) // 6


def test_dim_harm_matches_laplacian_nullity():
    for d in (2, 3, 4, 5):
        for n in range(7):
            assert harm.laplacian_nullity(d, n) == harm.dim_harm(d, n)


def test_sphere_moments():
    # mean of x_i^2 over S^{d-1} is 1/d
    for d in (2, 3, 4):
        alpha = (2,) + (0,) * (d - 1)
        assert harm.sphere_moment(d, alpha) == Fraction(1, d)
        assert harm.sphere_moment(d, (1,) + (0,) * (d - 1)) == 0
    # mean of x1^2 x2^2 on S^2 is 1/15
    assert harm.sphere_moment(3, (2, 2, 0)) == Fraction(1, 15)
    assert harm.sphere_moment(3, (4, 0, 0)) == Fraction(1, 5)


def test_basis_harmonic_orthogonal_complete():
    for d in (2, 3, 4):
        for n in range(5):
            basis = harm.orthonormal_basis(d, n)
            assert basis.size == harm.dim_harm(d, n)
            for i, u in enumerate(basis.orthogonal):
                assert u.laplacian().is_zero()
                assert u.is_homogeneous() and (u.degree == n or n == 0)
                assert harm.sphere_inner(u, u) == basis.norms_sq[i]
                for j in range(i):
                    assert harm.sphere_inner(u, basis.orthogonal[j]) == 0


def test_gram_float_is_identity():
    for d, n in ((2, 6), (3, 4), (4, 3)):
        g = harm.orthonormal_basis(d, n).gram_float()
        assert np.abs(g - np.eye(len(g))).max() <= 1e-12


def test_degree_orthogonality():
    rng = random.Random(2)
    for d in (2, 3):
        for _ in range(10):
            n = rng.randint(0, 5)
            m = rng.randint(0, 5)
            if n == m:
                continue
            bu = harm.orthonormal_basis(d, n)
            bv = harm.orthonormal_basis(d, m)
            u = bu.orthogonal[rng.randrange(bu.size)]
            v = bv.orthogonal[rng.randrange(bv.size)]
            assert harm.sphere_inner(u, v) == 0


def _rand_homogeneous(d, n, rng):
    from conformal_disks.polynomial import monomials

    return Polynomial(d, {alpha: rand_fraction(rng) for alpha in monomials(d, n)})


def test_harmonic_projection_idempotent_exact():
    rng = random.Random(9)
    for d in (2, 3):
        for n in (3, 4, 5):
            p = _rand_homogeneous(d, n, rng)
            h = harm.harmonic_projection(p)
            assert h.laplacian().is_zero()
            assert harm.harmonic_projection(h) == h


def test_harmonic_decomposition_reassembles():
    from conformal_disks.polynomial import radial_power

    rng = random.Random(4)
    for d in (2, 3):
        for n in (4, 5):
            p = _rand_homogeneous(d, n, rng)
            parts = harm.harmonic_decomposition(p)
            total = Polynomial.zero(d)
            for k, h in parts.items():
                assert h.laplacian().is_zero()
                total = total + radial_power(d, k) * h
            assert total == p


def test_zonal_reproduces_exactly():
    rng = random.Random(13)
    for d in (2, 3, 4):
        for n in (0, 1, 3):
            basis = harm.orthonormal_basis(d, n)
            a = tuple(rand_fraction(rng, span=2, den=5) for _ in range(d))
            z = harm.zonal(d, n, a)
            for u in basis.orthogonal:
                assert harm.sphere_inner(z, u) == u.evaluate(a)


def test_gegenbauer_frozen_values():
    # C_2^{1/2}(t) = (3t^2-1)/2 and C_2^{1}(t) = 4t^2-1
    assert harm.gegenbauer(3, 2, Fraction(1, 3)) == Fraction(-1, 3)
    assert harm.gegenbauer(4, 2, Fraction(1, 2)) == 0
    assert harm.gegenbauer(4, 2, Fraction(1)) == 3
    with pytest.raises(DimensionError):
        harm.gegenbauer(2, 1, Fraction(1, 2))
    with pytest.raises(DimensionError):
        harm.addition_coefficient(2, 1)


def test_gegenbauer_against_scipy():
    rng = random.Random(21)
    for d in (3, 4, 5):
        lam = (d - 2) / 2
        for n in range(9):
            for _ in range(10):
                t = rng.uniform(-1, 1)
                mine = float(harm.gegenbauer(d, n, Fraction(t).limit_denominator(10**6)))
                ref = scipy.special.eval_gegenbauer(n, lam, float(Fraction(t).limit_denominator(10**6)))
                assert abs(mine - ref) <= 1e-10 * max(1.0, abs(ref))


def test_addition_formula():
    # sum_k Y_k(a) Y_k(x) = A_{d,n} (|a||x|)^n C_n(cos t) / (c_{d,n} A_{d,n})
    rng = random.Random(31)
    for d in (3, 4):
        for n in range(9):
            basis = harm.orthonormal_basis(d, n)
            c = float(harm.addition_coefficient(d, n))
            for _ in range(10):
                a = np.array([rng.uniform(-1, 1) for _ in range(d)])
                x = np.array([rng.uniform(-1, 1) for _ in range(d)])
                ra, rx = np.linalg.norm(a), np.linalg.norm(x)
                if ra < 1e-3 or rx < 1e-3:
                    continue
                lhs = sum(
                    basis.evaluate_orthonormal(k, a) * basis.evaluate_orthonormal(k, x)
                    for k in range(basis.size)
                )
                cos_t = float(a @ x) / (ra * rx)
                rhs = (ra * rx) ** n * scipy.special.eval_gegenbauer(n, (d - 2) / 2, cos_t) / c
                assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_green_kernel_closed_forms():
    # d=3: 1/(4 pi |x-y|); d=2: -log|x-y|/(2 pi)
    x = np.array([0.1, 0.1, 0.1])
    y = np.array([0.1, 0.1, 0.6])
    assert abs(harm.green_kernel(3, x, y) - 1 / (2 * math.pi)) <= 1e-15
    a = np.array([0.4, 0.1])
    b = np.array([-0.3, -0.2])
    want = -math.log(float(np.linalg.norm(a - b))) / (2 * math.pi)
    assert abs(harm.green_kernel(2, a, b) - want) <= 1e-15
    # d=4: 1/(4 pi^2 |x-y|^2)
    x4 = np.array([0.5, 0.0, 0.0, 0.0])
    y4 = np.zeros(4)
    assert abs(harm.green_kernel(4, x4, y4) - 1 / (4 * math.pi**2 * 0.25)) <= 1e-15


def _legendre_partial(x, y, degree):
    # independent route: multipole sum with Legendre polynomials, d = 3
    rx, ry = np.linalg.norm(x), np.linalg.norm(y)
    cos_t = float(x @ y) / (rx * ry)
    return sum(
        ry**n / rx ** (n + 1) * scipy.special.eval_legendre(n, cos_t)
        for n in range(degree + 1)
    ) / (4 * math.pi)


def _log_partial(x, y, degree):
    # independent route: -log|x-y| = -log|x| + sum r^n cos(n t)/n, d = 2
    zx, zy = complex(x[0], x[1]), complex(y[0], y[1])
    r = abs(zy) / abs(zx)
    t = math.atan2(y[1], y[0]) - math.atan2(x[1], x[0])
    s = -math.log(abs(zx)) + sum(r**n * math.cos(n * t) / n for n in range(1, degree + 1))
    return s / (2 * math.pi)


def test_green_expansion_matches_independent_series():
    rng = random.Random(8)
    for _ in range(10):
        x3 = np.array([rng.uniform(-1, 1) for _ in range(3)])
        x3 *= 0.8 / np.linalg.norm(x3)
        y3 = np.array([rng.uniform(-1, 1) for _ in range(3)])
        y3 *= 0.3 / np.linalg.norm(y3)
        for deg in (0, 3, 9):
            got = harm.green_expansion_partial(3, x3, y3, deg)
            ref = _legendre_partial(x3, y3, deg)
            assert abs(got - ref) <= 1e-13

        x2 = np.array([rng.uniform(-1, 1) for _ in range(2)])
        x2 *= 0.8 / np.linalg.norm(x2)
        y2 = np.array([rng.uniform(-1, 1) for _ in range(2)])
        y2 *= 0.35 / np.linalg.norm(y2)
        for deg in (1, 4, 10):
            got = harm.green_expansion_partial(2, x2, y2, deg)
            ref = _log_partial(x2, y2, deg)
            assert abs(got - ref) <= 1e-13


def test_green_expansion_converges_to_kernel():
    for d, x, y in (
        (2, np.array([0.7, 0.1]), np.array([0.15, -0.1])),
        (3, np.array([0.6, 0.2, -0.3]), np.array([0.1, 0.05, 0.1])),
        (4, np.array([0.6, 0.0, 0.2, 0.0]), np.array([0.05, 0.1, 0.0, 0.05])),
    ):
        exact = harm.green_kernel(d, x, y)
        errs = [abs(harm.green_expansion_partial(d, x, y, deg) - exact) for deg in (6, 12, 24)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 1e-6


def test_expansion_terms_sum_to_partial():
    x = np.array([0.7, 0.0, 0.1])
    y = np.array([0.2, 0.1, 0.0])
    total = sum(harm.expansion_term(3, n, x, y) for n in range(8))
    assert abs(total - harm.green_expansion_partial(3, x, y, 7)) <= 1e-15


def test_surface_area_values():
    assert abs(harm.surface_area(2) - 2 * math.pi) <= 1e-15
    assert abs(harm.surface_area(3) - 4 * math.pi) <= 1e-15
    assert abs(harm.surface_area(4) - 2 * math.pi**2) <= 1e-15
