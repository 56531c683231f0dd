"""Conformal generators, words, Mobius maps, and holomorphic series."""
import math
import random

import numpy as np
import pytest

from conformal_disks import conformal as cf
from conformal_disks.errors import DegenerateError, RadiusError


def rand_point(rng, d, scale=0.5):
    return np.array([rng.uniform(-scale, scale) for _ in range(d)])


def test_generator_apply_and_omega():
    rng = random.Random(3)
    x = rand_point(rng, 3)

    tr = cf.Translation([0.1, -0.2, 0.3])
    assert np.allclose(tr.apply(x), x + np.array([0.1, -0.2, 0.3]))
    assert tr.omega(x) == 1.0

    dl = cf.Dilation(0.4)
    assert np.allclose(dl.apply(x), 0.4 * x)
    assert abs(dl.omega(x) - 0.4) <= 1e-15

    rot = cf.Orthogonal(np.array([[0.0, -1.0, 0], [1.0, 0, 0], [0, 0, 1.0]]))
    assert abs(np.linalg.norm(rot.apply(x)) - np.linalg.norm(x)) <= 1e-14
    assert abs(rot.omega(x) - 1.0) <= 1e-15

    sc = cf.SpecialConformal([0.2, 0.0, 0.0])
    # x / |x|^2 inversion sandwich: |K_b(x)| = |x| / |1 - 2 b.x + |b|^2|x|^2|^{1／2}...
    # check instead against the defining formula directly
    b = np.array([0.2, 0.0, 0.0])
    den = 1 - 2 * float(b @ x) + float(b @ b) * float(x @ x)
    assert np.allclose(sc.apply(x), (x - b * float(x @ x)) / den)
    assert abs(sc.omega(x) - 1 / abs(den)) <= 1e-14


def test_generator_inverses():
    rng = random.Random(7)
    gens = [
        cf.Translation([0.1, -0.3]),
        cf.Dilation(0.7),
        cf.Orthogonal(np.array([[0.0, -1.0], [1.0, 0.0]])),
        cf.SpecialConformal([0.15, 0.1]),
    ]
    for g in gens:
        for _ in range(5):
            x = rand_point(rng, 2, 0.4)
            assert np.abs(g.inverse().apply(g.apply(x)) - x).max() <= 1e-12


def test_word_apply_omega_chain_rule():
    rng = random.Random(1)
    gens = [cf.Dilation(0.5), cf.SpecialConformal([0.1, 0.0, -0.1]), cf.Translation([0.05, 0.1, 0.0])]
    w = cf.Word(3, gens)
    for _ in range(10):
        x = rand_point(rng, 3, 0.4)
        # left-to-right pipeline: the first listed generator acts first
        y = x
        om = 1.0
        for g in gens:
            om *= g.omega(y)
            y = g.apply(y)
        assert np.abs(w.apply(x) - y).max() <= 1e-13
        assert abs(w.omega(x) - om) <= 1e-13
        assert np.abs(w.inverse().apply(w.apply(x)) - x).max() <= 1e-11


def test_word_affine_detection():
    aff = cf.Word(3, [cf.Dilation(0.4), cf.Translation([0.1, 0.0, 0.0])])
    assert aff.is_affine
    M, t = aff.affine_data()
    x = np.array([0.1, -0.2, 0.3])
    assert np.abs(aff.apply(x) - (M @ x + t)).max() <= 1e-14
    non = cf.Word(3, [cf.SpecialConformal([0.1, 0.0, 0.0])])
    assert not non.is_affine


def test_identity_word():
    idw = cf.identity_word(2)
    x = np.array([0.3, -0.4])
    assert np.allclose(idw.apply(x), x)
    assert idw.omega(x) == 1.0


def test_word_to_mobius_matches_pointwise():
    w = cf.Word(2, [cf.Dilation(0.5), cf.SpecialConformal([0.1, -0.05]), cf.Translation([0.2, 0.1])])
    m = w.to_mobius()
    rng = random.Random(5)
    for _ in range(20):
        x = rand_point(rng, 2, 0.5)
        assert np.abs(w.apply(x) - m.apply(x)).max() <= 1e-12
        assert abs(w.omega(x) - m.omega(x)) <= 1e-12


def test_mobius_evaluate_derivative_det():
    m = cf.Mobius([[1.0, 0.3 + 0.1j], [0.2 - 0.1j, 1.0]])
    z = 0.2 + 0.3j
    a, b = m.matrix[0]
    c, d = m.matrix[1]
    assert abs(m.evaluate(z) - (a * z + b) / (c * z + d)) <= 1e-15
    assert abs(m.det - (a * d - b * c)) <= 1e-15
    h = 1e-6
    fd = (m.evaluate(z + h) - m.evaluate(z - h)) / (2 * h)
    assert abs(m.derivative(z, 1) - fd) <= 1e-8
    # second derivative from the first
    fd2 = (m.derivative(z + h, 1) - m.derivative(z - h, 1)) / (2 * h)
    assert abs(m.derivative(z, 2) - fd2) <= 1e-7


def test_mobius_from_disk_data_properties():
    # z -> scale e^{i angle} (z + center)/(1 + conj(center) z)
    center, scale, angle = 0.3 + 0.1j, 0.8, 0.5
    m = cf.mobius_from_disk_data(center, scale, angle)
    assert abs(m.evaluate(-center)) <= 1e-15
    # m'(0) = scale e^{i angle} (1 - |center|^2)
    assert abs(cmath_phase(m.derivative(0j, 1)) - angle) <= 1e-12
    # the unit circle maps onto the circle of radius `scale`
    worst = max(
        abs(abs(m.evaluate(np.exp(2j * np.pi * k / 64))) - scale) for k in range(64)
    )
    assert worst <= 1e-12


def cmath_phase(z):
    return math.atan2(z.imag, z.real)


def test_mobius_identity_and_schwarzian_zero():
    m = cf.mobius_identity()
    assert m.evaluate(0.3 + 0.1j) == 0.3 + 0.1j
    s = cf.schwarzian(cf.mobius_from_disk_data(0.1j, 0.7, -0.2), 0.1 + 0.1j)
    assert abs(s.value) <= 1e-12


def test_schwarzian_quadratic_frozen():
    # S(z + eps z^2)(0) = -6 eps^2
    phi = cf.HolomorphicSeries([0, 1, 0.1])
    s = cf.schwarzian(phi, 0j)
    assert abs(s.value - (-0.06)) <= 1e-14
    assert s.basepoint == 0j


def test_series_evaluate_and_jets():
    phi = cf.HolomorphicSeries([0.05, 0.8, 0.1j, -0.02])
    z = 0.2 - 0.1j
    want = 0.05 + 0.8 * z + 0.1j * z**2 - 0.02 * z**3
    assert abs(phi.evaluate(z) - want) <= 1e-15
    assert abs(phi.derivative_at(z, 1) - (0.8 + 0.2j * z - 0.06 * z**2)) <= 1e-15
    assert abs(phi.derivative_at(z, 3) - (-0.12)) <= 1e-15
    jet = phi.jet(z, 2)
    assert jet[0] == phi.evaluate(z) and jet[2] == phi.derivative_at(z, 2)
    with pytest.raises(RadiusError):
        phi.evaluate(1.2)


def test_series_degenerate_guard():
    with pytest.raises(DegenerateError):
        cf.HolomorphicSeries([0, 0, 1.0])
    # the permissive flag postpones rejection to the certifier
    phi = cf.HolomorphicSeries([0, 0, 1.0], allow_degenerate=True)
    assert cf.certify_injective(phi) is False


def test_certify_injective_small_perturbation():
    assert cf.certify_injective(cf.HolomorphicSeries([0, 0.5, 0.05, 0.01])) is True


def test_compose_series_matches_pointwise():
    phi = cf.HolomorphicSeries([0, 0.7, 0.05, -0.02j])
    psi = cf.HolomorphicSeries([0.02, 0.5, 0.03])
    comp = cf.compose(phi.with_truncation(30), psi)
    rng = random.Random(17)
    for _ in range(20):
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        assert abs(comp.evaluate(z) - phi.evaluate(psi.evaluate(z))) <= 1e-12


def test_compose_word_and_mobius():
    rng = random.Random(23)
    m1 = cf.mobius_from_disk_data(0.1 - 0.2j, 0.6, 0.3)
    m2 = cf.mobius_from_disk_data(-0.2 + 0.1j, 0.5, -0.4)
    comp = cf.compose(m1, m2)
    assert isinstance(comp, cf.Mobius)
    w1 = cf.Word(3, [cf.Dilation(0.5), cf.Translation([0.1, 0.0, 0.0])])
    w2 = cf.Word(3, [cf.SpecialConformal([0.05, 0.1, 0.0])])
    wc = cf.compose(w1, w2)
    for _ in range(10):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        assert abs(comp.evaluate(z) - m1.evaluate(m2.evaluate(z))) <= 1e-13
        x = rand_point(rng, 3, 0.4)
        assert np.abs(wc.apply(x) - w1.apply(w2.apply(x))).max() <= 1e-12


def test_apply_and_conformal_factor_dispatch():
    m = cf.mobius_from_disk_data(0.1j, 0.5, 0.0)
    z = 0.2 + 0.1j
    assert cf.apply(m, z) == m.evaluate(z)
    assert abs(cf.conformal_factor(m, z) - abs(m.derivative(z, 1))) <= 1e-15
    w = cf.identity_word(3)
    x = np.array([0.1, 0.2, 0.3])
    assert np.allclose(cf.apply(w, x), x)
    assert cf.conformal_factor(w, x) == 1.0


def test_series_inverse_point():
    phi = cf.HolomorphicSeries([0, 0.8, 0.05])
    w = phi.evaluate(0.3 - 0.2j)
    z = cf.series_inverse_point(phi, w)
    assert abs(z - (0.3 - 0.2j)) <= 1e-12


def test_with_truncation_preserves_values():
    phi = cf.HolomorphicSeries([0, 0.6, 0.1, 0.02])
    ext = phi.with_truncation(9)
    assert ext.truncation == 9
    z = 0.1 + 0.2j
    assert abs(ext.evaluate(z) - phi.evaluate(z)) <= 1e-16


def test_mobius_schwarzian_vanishes_everywhere():
    rng = random.Random(29)
    for _ in range(10):
        m = cf.mobius_from_disk_data(
            complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)),
            rng.uniform(0.4, 0.8),
            rng.uniform(-math.pi, math.pi),
        )
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        assert abs(cf.schwarzian(m, z).value) <= 1e-10
