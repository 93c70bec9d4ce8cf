import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mineseg.dataset import (
    DegradeConfig,
    FilterConfig,
    HashSet,
    Reason,
    average_hash,
    degrade,
    filter_image,
    hamming64,
    laplacian_variance,
    name_key,
)
from mineseg.raster import RasterImage, read_image, write_image

from conftest import CORPUS, GOLDEN


def test_pure_scaling():
    out = degrade(RasterImage(np.full((5, 5, 3), 0.8)), DegradeConfig(noise_sigma=0, brightness_factor=0.5,
                                                                      contrast_factor=1))
    assert np.allclose(out.data, 0.4)


def test_identity_when_neutral():
    img = RasterImage(np.random.default_rng(0).random((6, 7, 3)))
    out = degrade(img, DegradeConfig(noise_sigma=0, brightness_factor=1, contrast_factor=1))
    assert np.allclose(out.data, img.data, atol=1e-15)


def test_formula_without_noise():
    a = np.random.default_rng(3).random((8, 8, 1))
    out = degrade(RasterImage(a), DegradeConfig(noise_sigma=0, brightness_factor=0.6, contrast_factor=1.5))
    dark = a * 0.6
    assert np.allclose(out.data, np.clip((dark - dark.mean()) * 1.5 + dark.mean(), 0, 1))


def test_golden_png(tmp_path):
    img = read_image(CORPUS / "images" / "scene_00.png")
    write_image(degrade(img, DegradeConfig(seed=42)), tmp_path / "d.png")
    assert (tmp_path / "d.png").read_bytes() == (GOLDEN / "degrade_seed42.png").read_bytes()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(0, 2**63 - 1))
def test_deterministic_and_seed_sensitive(s1, s2):
    img = RasterImage(np.full((16, 16, 3), 0.5))
    a = degrade(img, DegradeConfig(seed=s1))
    assert np.array_equal(a.data, degrade(img, DegradeConfig(seed=s1)).data)
    if s1 != s2:
        assert not np.array_equal(a.data, degrade(img, DegradeConfig(seed=s2)).data)


def test_streams_differ():
    img = RasterImage(np.full((16, 16, 3), 0.5))
    a = degrade(img, DegradeConfig(seed=1), stream=name_key("a.png"))
    b = degrade(img, DegradeConfig(seed=1), stream=name_key("b.png"))
    assert not np.array_equal(a.data, b.data)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (6, 6, 3), elements=st.floats(0, 1)),
       st.floats(0, 0.5), st.floats(0.01, 1), st.floats(1, 4))
def test_output_stays_in_range(data, sigma, bf, cf):
    out = degrade(RasterImage(data), DegradeConfig(noise_sigma=sigma, brightness_factor=bf, contrast_factor=cf))
    assert out.data.min() >= 0 and out.data.max() <= 1


@pytest.mark.parametrize("kw", [{"noise_sigma": -1}, {"brightness_factor": 0}, {"contrast_factor": 0.5}])
def test_degrade_config_validation(kw):
    with pytest.raises(ValueError):
        DegradeConfig(**kw)


def test_filter_examples():
    v = filter_image(RasterImage(np.zeros((32, 32))), FilterConfig(), HashSet())
    assert not v.keep and Reason.TOO_DARK in v.reasons
    v = filter_image(RasterImage(np.full((32, 32), 0.5)))
    assert Reason.BLURRED in v.reasons and Reason.TOO_DARK not in v.reasons

    seen = HashSet()
    img = read_image(CORPUS / "images" / "scene_01.png")
    first = filter_image(img, FilterConfig(), seen)
    second = filter_image(img, FilterConfig(), seen)
    assert Reason.DUPLICATE not in first.reasons
    assert Reason.DUPLICATE in second.reasons


def test_corpus_frames_are_neither_dark_nor_blurred():
    for p in sorted((CORPUS / "images").glob("*.png")):
        assert filter_image(read_image(p)).keep, p.name


def test_laplacian_variance_oracle():
    a = np.zeros((5, 5))
    a[2, 2] = 1.0
    # responses: -4 at the centre, +1 at four neighbours, 0 elsewhere
    resp = np.zeros(25)
    resp[0] = -4
    resp[1:5] = 1
    assert laplacian_variance(a) == pytest.approx(resp.var(), abs=1e-15)


def test_average_hash_pattern():
    a = np.zeros((64, 64))
    a[:, 32:] = 1.0
    h = average_hash(a)
    expected = sum(1 << (r * 8 + c) for r in range(8) for c in range(4, 8))
    assert h == expected
    assert hamming64(h, h ^ 0b1011) == 3


def test_verdict_keep_iff_no_reasons():
    v = filter_image(RasterImage(np.random.default_rng(0).random((32, 32))))
    assert v.keep == (len(v.reasons) == 0)
    assert v.to_dict()["keep"] is v.keep
