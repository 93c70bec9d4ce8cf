import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mineseg.errors import AlignmentFailed, InsufficientMatches
from mineseg.fusion.geometry import (
    PlanarTransform,
    TransformKind,
    corner_reprojection_error,
    estimate_transform,
    warp_mask,
)

from conftest import rect


def correspondences(t: PlanarTransform, n=40, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 200, (n, 2))
    return [(i, i) for i in range(n)], a, t.apply(a)


def test_pure_translation():
    m, a, b = correspondences(PlanarTransform.translation(10, 5))
    est, inl = estimate_transform(m, a, b)
    assert inl.all()
    assert abs(est.tx - 10) <= 1e-6 and abs(est.ty - 5) <= 1e-6
    assert est.scale == pytest.approx(1, abs=1e-9) and est.theta == pytest.approx(0, abs=1e-9)


def test_identity_correspondences():
    m, a, b = correspondences(PlanarTransform.identity())
    est, _ = estimate_transform(m, a, b)
    assert abs(est.scale - 1) <= 1e-9 and abs(est.theta) <= 1e-9
    assert abs(est.tx) <= 1e-9 and abs(est.ty) <= 1e-9


def test_rotation_with_40pct_outliers():
    truth = PlanarTransform.similarity(1.0, math.radians(10), 4, -3)
    m, a, b = correspondences(truth, n=100, seed=1)
    rng = np.random.default_rng(2)
    bad = rng.choice(100, 40, replace=False)
    b = b.copy()
    b[bad] = rng.uniform(0, 200, (40, 2))
    est, inl = estimate_transform(m, a, b, seed=5)
    assert abs(math.degrees(est.theta) - 10) <= 0.5
    assert not inl[bad].any()


def test_failures():
    m, a, b = correspondences(PlanarTransform.identity(), n=3)
    with pytest.raises(InsufficientMatches):
        estimate_transform(m, a, b)
    rng = np.random.default_rng(3)
    m, a, _ = correspondences(PlanarTransform.identity(), n=30)
    with pytest.raises(AlignmentFailed):
        estimate_transform(m, a, rng.uniform(0, 200, (30, 2)), inlier_px=0.5)
    m, a, b = correspondences(PlanarTransform.similarity(3.0, 0, 0, 0))
    with pytest.raises(AlignmentFailed):
        estimate_transform(m, a, b)


def test_deterministic_given_seed():
    truth = PlanarTransform.similarity(1.1, 0.2, 3, 1)
    m, a, b = correspondences(truth, n=50, seed=4)
    b = b + np.random.default_rng(0).normal(0, 0.5, b.shape)
    assert estimate_transform(m, a, b, seed=9)[0] == estimate_transform(m, a, b, seed=9)[0]


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 2), st.floats(-3, 3), st.floats(-50, 50), st.floats(-50, 50))
def test_inverse_roundtrip(s, th, tx, ty):
    t = PlanarTransform.similarity(s, th, tx, ty)
    pts = np.array([[0.0, 0], [10, 3], [-7, 22]])
    assert np.allclose(t.inverse().apply(t.apply(pts)), pts, atol=1e-9)
    assert np.allclose(t.matrix() @ np.array([10, 3, 1.0]), [*t.apply(pts[1]), 1])


def test_corner_error_zero_for_truth():
    t = PlanarTransform.similarity(1.2, 0.1, 5, 6)
    assert corner_reprojection_error(t, t, 256, 256) == 0
    assert corner_reprojection_error(PlanarTransform.translation(3, 4), PlanarTransform.identity(), 9, 9) == 5


def test_warp_identity_and_out_of_bounds():
    m = np.random.default_rng(0).random((12, 15)) < 0.4
    assert np.array_equal(warp_mask(m, PlanarTransform.identity()), m)
    assert np.array_equal(warp_mask(m, PlanarTransform.translation(0, 0)), m)
    assert not warp_mask(m, PlanarTransform.translation(15, 0)).any()


def test_warp_translation_exact():
    m = rect((20, 20), 2, 3, 9, 8)
    assert np.array_equal(warp_mask(m, PlanarTransform.translation(3, 2)), rect((20, 20), 5, 5, 12, 10))


def test_warp_quarter_turn():
    m = np.zeros((5, 5), bool)
    m[1, 3] = True
    # rotate 90 degrees about the centre (2, 2)
    t = PlanarTransform.similarity(1, math.pi / 2, 4, 0)
    out = warp_mask(m, t)
    assert out.sum() == 1 and out[3, 3]


def test_kind_serialisation():
    d = PlanarTransform.translation(1, 2).to_dict()
    assert d["kind"] == TransformKind.SIMILARITY.value == "Similarity"
    assert PlanarTransform.identity().to_dict()["kind"] == "Identity"
