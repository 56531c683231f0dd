"""Shared test helpers.

Property tests below use seeded `random.Random` loops so failures replay
exactly; nothing here depends on global RNG state.
"""
from fractions import Fraction

from conformal_disks.harmonic import orthonormal_basis
from conformal_disks.polynomial import Polynomial


def rand_harmonic(d: int, max_deg: int, rng) -> Polynomial:
    """Random harmonic polynomial with small rational coefficients."""
    total = Polynomial.zero(d)
    for n in range(max_deg + 1):
        basis = orthonormal_basis(d, n)
        for u in basis.orthogonal:
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            total = total + u.scale(c)
    return total


def rand_fraction(rng, span: int = 4, den: int = 8) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))
