"""Disk-embedding configurations and operadic composition."""
import math
import random

import numpy as np
import pytest

from conformal_disks import conformal as cf
from conformal_disks import operad as op
from conformal_disks.errors import ContainmentError, DisjointnessError, RadiusError


def test_make_ball_margin_exact():
    e = op.make_ball([0.3, 0.0], 0.2)
    assert abs(e.containment_margin - 0.5) <= 1e-15
    assert e.dim == 2
    with pytest.raises(ContainmentError):
        op.make_ball([0.9, 0.0], 0.2)
    with pytest.raises(ValueError):
        op.make_ball([0.0, 0.0], -0.1)


def test_embedding_requires_image_in_disk():
    # c_1 = 1 is the identity: boundary on the unit circle, no margin
    with pytest.raises(ContainmentError):
        op.DiskEmbedding(cf.HolomorphicSeries([0.2, 1.0]))
    e = op.DiskEmbedding(cf.HolomorphicSeries([0.0, 0.5, 0.05]))
    assert e.containment_margin > 0
    with pytest.raises(RadiusError):
        op.DiskEmbedding(cf.HolomorphicSeries([0.0, 0.5], radius=0.8))


def test_configuration_disjointness_certified():
    a = op.make_ball([0.4, 0.0], 0.2)
    b = op.make_ball([-0.4, 0.0], 0.2)
    cfg = op.make_configuration([a, b])
    assert cfg.arity == 2
    assert abs(cfg.disjointness_margin - 0.4) <= 1e-6
    with pytest.raises(DisjointnessError):
        op.make_configuration([op.make_ball([0.2, 0.0], 0.3), op.make_ball([-0.2, 0.0], 0.3)])
    # near-tangency is certified with the true (tiny) margin
    close = op.make_configuration(
        [op.make_ball([0.2505, 0.0], 0.25), op.make_ball([-0.2505, 0.0], 0.25)]
    )
    assert 0 < close.disjointness_margin <= 1.1e-3
    # nesting is not disjointness
    with pytest.raises(DisjointnessError):
        op.make_configuration([op.make_ball([0.0, 0.0], 0.5), op.make_ball([0.0, 0.0], 0.1)])


def test_configuration_d3_sphere_fit():
    a = op.make_ball([0.4, 0.0, 0.0], 0.25)
    b = op.make_ball([-0.35, 0.1, 0.0], 0.2)
    cfg = op.make_configuration([a, b])
    gap = math.hypot(0.75, 0.1) - 0.45
    assert abs(cfg.disjointness_margin - gap) <= 1e-6
    with pytest.raises(DisjointnessError):
        op.make_configuration([op.make_ball([0.2, 0.0, 0.0], 0.3), op.make_ball([-0.2, 0.0, 0.0], 0.3)])


def test_empty_and_single_configurations():
    empty = op.make_configuration([], dim=3)
    assert empty.arity == 0 and empty.dim == 3
    single = op.make_configuration([op.make_ball([0.1, 0.0], 0.3)])
    assert single.arity == 1 and single.disjointness_margin == math.inf


def test_identity_configuration():
    for d in (2, 3):
        ident = op.identity_configuration(d)
        assert ident.arity == 1
        x = np.array([0.2] * d)
        assert np.allclose(ident.embeddings[0].map.apply(x), x)


def test_compose_at_unit_laws():
    cfg = op.make_configuration([op.make_ball([0.4, 0.0], 0.2), op.make_ball([-0.4, 0.0], 0.2)])
    ident = op.identity_configuration(2)
    rng = random.Random(3)
    pts = [np.array([rng.uniform(-0.9, 0.9) * 0.7, rng.uniform(-0.6, 0.6)]) for _ in range(10)]

    def residual(c1, c2):
        worst = 0.0
        for e1, e2 in zip(c1.embeddings, c2.embeddings):
            for x in pts:
                worst = max(worst, float(np.abs(e1.map.apply(x) - e2.map.apply(x)).max()))
        return worst

    for i in (1, 2):
        left = op.compose_at(cfg, i, ident)
        assert left.arity == 2 and residual(left, cfg) <= 1e-12
    right = op.compose_at(ident, 1, cfg)
    assert right.arity == 2 and residual(right, cfg) <= 1e-12


def test_compose_at_slot_indexing():
    outer = op.make_configuration([op.make_ball([0.45, 0.0], 0.3), op.make_ball([-0.45, 0.0], 0.3)])
    inner = op.make_configuration([op.make_ball([0.3, 0.0], 0.25), op.make_ball([-0.5, 0.0], 0.25)])
    glued = op.compose_at(outer, 2, inner)
    assert glued.arity == 3
    # slot 1 is untouched; slots 2..3 are outer_2 composed with inner slots
    x = np.array([0.1, 0.2])
    assert np.allclose(glued.embeddings[0].map.apply(x), outer.embeddings[0].map.apply(x))
    want = outer.embeddings[1].map.apply(inner.embeddings[0].map.apply(x))
    assert np.abs(glued.embeddings[1].map.apply(x) - want).max() <= 1e-12
    with pytest.raises(IndexError):
        op.compose_at(outer, 0, inner)
    with pytest.raises(IndexError):
        op.compose_at(outer, 3, inner)


def test_compose_at_associativity():
    a = op.make_configuration([op.make_ball([0.4, 0.0], 0.35), op.make_ball([-0.5, 0.0], 0.3)])
    b = op.make_configuration([op.make_ball([0.3, 0.1], 0.3), op.make_ball([-0.45, -0.1], 0.3)])
    c = op.make_configuration([op.make_ball([0.2, 0.0], 0.4)])
    lhs = op.compose_at(op.compose_at(a, 1, b), 1, c)
    rhs = op.compose_at(a, 1, op.compose_at(b, 1, c))
    assert lhs.arity == rhs.arity == 3
    x = np.array([0.15, -0.1])
    for e1, e2 in zip(lhs.embeddings, rhs.embeddings):
        assert np.abs(e1.map.apply(x) - e2.map.apply(x)).max() <= 1e-12


def test_permute_group_action():
    balls = [op.make_ball([0.5, 0.0], 0.15), op.make_ball([0.0, 0.5], 0.15), op.make_ball([-0.5, 0.0], 0.15)]
    cfg = op.make_configuration(balls)
    p = op.permute((2, 3, 1), cfg)
    assert p.embeddings[0] is cfg.embeddings[1]
    assert p.embeddings[2] is cfg.embeddings[0]
    # composing with the inverse permutation restores the original
    q = op.permute((3, 1, 2), p)
    assert all(e1 is e2 for e1, e2 in zip(q.embeddings, cfg.embeddings))
    with pytest.raises(IndexError):
        op.permute((1, 2), cfg)
    with pytest.raises(IndexError):
        op.permute((1, 1, 2), cfg)


def test_series_embedding_configuration():
    e1 = op.DiskEmbedding(cf.HolomorphicSeries([0.45, 0.3, 0.02]))
    e2 = op.DiskEmbedding(cf.HolomorphicSeries([-0.45, 0.25, -0.03j]))
    cfg = op.make_configuration([e1, e2])
    assert cfg.arity == 2 and cfg.disjointness_margin > 0


def test_mixed_dimension_rejected():
    with pytest.raises(ValueError):
        op.make_configuration([op.make_ball([0.3, 0.0], 0.2), op.make_ball([-0.3, 0.0, 0.0], 0.2)])
    outer3 = op.make_configuration([op.make_ball([0.0, 0.0, 0.0], 0.5)])
    inner2 = op.make_configuration([op.make_ball([0.0, 0.0], 0.5)])
    with pytest.raises(ValueError):
        op.compose_at(outer3, 1, inner2)


def test_record_shapes():
    from conformal_disks import records

    cfg = op.make_configuration([op.make_ball([0.3, 0.0], 0.2)])
    rec = cfg.record()
    assert rec["arity"] == 1
    word = rec["embeddings"][0]["word"]
    assert word[0]["kind"] == "dilation" and word[1]["kind"] == "translation"
    # the codec adds the dimension when there is no embedding to carry it
    empty = records.config_record(op.make_configuration([], dim=3))
    assert empty == {"arity": 0, "embeddings": [], "dim": 3}
