"""Exact sparse polynomial arithmetic."""
import random
from fractions import Fraction

import pytest

from conformal_disks.exact import GaussianRational
from conformal_disks.polynomial import Polynomial, monomials, radial_power

from conftest import rand_fraction


def rand_poly(d, rng, deg=3):
    coeffs = {}
    for alpha in monomials(d, rng.randint(0, deg)):
        if rng.random() < 0.5:
            coeffs[alpha] = rand_fraction(rng)
    return Polynomial(d, coeffs)


def test_zero_cleanup_and_degree():
    p = Polynomial(2, {(1, 0): Fraction(0), (0, 2): Fraction(3)})
    assert (1, 0) not in p.coeffs
    assert p.degree == 2
    assert Polynomial.zero(3).degree == -1
    assert Polynomial.one(2).degree == 0


def test_bad_index_rejected():
    with pytest.raises(ValueError):
        Polynomial(2, {(1, 0, 0): Fraction(1)})
    with pytest.raises(ValueError):
        Polynomial(2, {(-1, 0): Fraction(1)})


def test_immutable():
    p = Polynomial.one(2)
    with pytest.raises(AttributeError):
        p.dim = 3


def test_ring_axioms_random():
    rng = random.Random(11)
    for _ in range(30):
        d = rng.choice((2, 3))
        p, q, r = (rand_poly(d, rng) for _ in range(3))
        assert (p + q) - q == p
        assert p * (q + r) == p * q + p * r
        assert p * q == q * p
        pt = tuple(rand_fraction(rng) for _ in range(d))
        assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


def test_diff_product_rule():
    rng = random.Random(5)
    for _ in range(15):
        p, q = rand_poly(2, rng), rand_poly(2, rng)
        for i in range(2):
            assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


def test_diff_alpha_matches_repeated_diff():
    p = Polynomial(3, {(2, 1, 1): Fraction(7, 3), (0, 3, 0): Fraction(-1, 2)})
    assert p.diff_alpha((1, 1, 0)) == p.diff(0).diff(1)
    assert p.diff_alpha((0, 0, 2)) == p.diff(2).diff(2)


def test_laplacian_sign_convention():
    # non-negative operator: -sum d_i^2, so Lap(x^2) = -2
    p = Polynomial.monomial(2, (2, 0))
    assert p.laplacian() == Polynomial(2, {(0, 0): Fraction(-2)})
    # |x|^2 in dimension d maps to -2d
    assert radial_power(3, 1).laplacian() == Polynomial(3, {(0, 0, 0): Fraction(-6)})


def test_harmonic_examples_annihilated():
    xy = Polynomial.monomial(2, (1, 1))
    assert xy.laplacian().is_zero()
    x2_y2 = Polynomial(2, {(2, 0): Fraction(1), (0, 2): Fraction(-1)})
    assert x2_y2.laplacian().is_zero()


def test_gaussian_rational_coefficients():
    i = GaussianRational(Fraction(0), Fraction(1))
    p = Polynomial.monomial(2, (1, 0), i)
    q = p * p
    assert q.coeffs[(2, 0)] == GaussianRational(Fraction(-1), Fraction(0))
    assert p.conjugate().coeffs[(1, 0)] == GaussianRational(Fraction(0), Fraction(-1))


def test_primitive_direction():
    p = Polynomial(2, {(2, 0): Fraction(-3, 4), (0, 2): Fraction(3, 2)})
    prim = p.primitive()
    # coprime integers, positive leading (graded-lex) coefficient
    assert prim.coeffs[(2, 0)] == Fraction(1)
    assert prim.coeffs[(0, 2)] == Fraction(-2)


def test_homogeneous_parts():
    p = Polynomial(2, {(2, 0): Fraction(1), (1, 0): Fraction(2), (0, 0): Fraction(5)})
    parts = p.homogeneous_parts()
    assert sorted(parts) == [0, 1, 2]
    assert sum(parts.values(), Polynomial.zero(2)) == p
    assert all(q.is_homogeneous() for q in parts.values())


def test_evaluate_exact_rational():
    p = Polynomial(2, {(3, 1): Fraction(5, 7)})
    assert p.evaluate((Fraction(1, 2), Fraction(2, 3))) == Fraction(5, 7) * Fraction(1, 8) * Fraction(2, 3)
