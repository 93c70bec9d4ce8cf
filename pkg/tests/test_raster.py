import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mineseg.errors import DecodeError, EmptyMask, RleError, ShapeMismatch
from mineseg.raster import (
    ClassId,
    Instance,
    InstanceSet,
    RAW_CLASSES,
    RasterImage,
    decode_rle,
    encode_rle,
    load_instance_dir,
    load_instances,
    read_image,
    save_instances,
    tight_bbox,
    write_image,
)

from conftest import iset, rect


def test_rle_row_major_value_count_runs():
    m = np.array([[1, 1], [0, 0]], dtype=bool)
    assert encode_rle(m) == "1:2,0:2"
    assert encode_rle(np.zeros((3, 3), bool)) == "0:9"


def test_rle_roundtrip_1000_seeded_masks():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        m = rng.random((16, 16)) < rng.random()
        rle = encode_rle(m)
        assert sum(int(r.split(":")[1]) for r in rle.split(",")) == 256
        assert np.array_equal(decode_rle(rle, 16, 16), m)


@settings(max_examples=200, deadline=None)
@given(arrays(np.bool_, st.tuples(st.integers(1, 12), st.integers(1, 12))))
def test_rle_roundtrip_property(m):
    assert np.array_equal(decode_rle(encode_rle(m), m.shape[1], m.shape[0]), m)


@pytest.mark.parametrize("bad", ["1:2,0:1", "2:4", "1:x", "0:0,1:4", "1:5"])
def test_rle_rejects_malformed(bad):
    with pytest.raises(RleError):
        decode_rle(bad, 2, 2)


def test_bbox_examples():
    m = np.zeros((10, 10), bool)
    m[5, 3] = True
    assert tight_bbox(m) == (3, 5, 4, 6)
    assert tight_bbox(np.ones((4, 7), bool)) == (0, 0, 7, 4)
    L = np.zeros((8, 8), bool)
    L[1:4, 2] = True
    L[3, 2:7] = True
    assert tight_bbox(L) == (2, 1, 7, 4)
    with pytest.raises(EmptyMask):
        tight_bbox(np.zeros((3, 3), bool))


@settings(max_examples=200, deadline=None)
@given(arrays(np.bool_, st.tuples(st.integers(1, 10), st.integers(1, 10))))
def test_bbox_is_minimal_cover(m):
    if not m.any():
        return
    x0, y0, x1, y1 = tight_bbox(m)
    inside = np.zeros_like(m)
    inside[y0:y1, x0:x1] = True
    assert not (m & ~inside).any()
    # every edge row/column of the box touches the mask
    assert m[y0, x0:x1].any() and m[y1 - 1, x0:x1].any()
    assert m[y0:y1, x0].any() and m[y0:y1, x1 - 1].any()


def test_instance_invariants():
    with pytest.raises(EmptyMask):
        Instance("wall", np.zeros((4, 4), bool))
    with pytest.raises(ValueError):
        Instance("wall", rect((4, 4), 0, 0, 2, 2), bbox=(0, 0, 3, 3))
    with pytest.raises(ValueError):
        Instance("wall", rect((4, 4), 0, 0, 2, 2), score=1.5)
    with pytest.raises(ShapeMismatch):
        InstanceSet("x", 4, 4, (Instance("road", rect((5, 4), 0, 0, 1, 1)),))
    assert ClassId.SURROUNDING not in RAW_CLASSES


def test_instance_json_roundtrip(tmp_path):
    s = iset("img7", (6, 9), ("wall", rect((6, 9), 1, 1, 4, 5), 0.75), ("people", rect((6, 9), 6, 0, 9, 2)))
    save_instances(s, tmp_path / "a.json")
    doc = json.loads((tmp_path / "a.json").read_text())
    assert set(doc) == {"image_id", "width", "height", "instances"}
    assert doc["instances"][0] == {"class": "wall", "bbox": [1, 1, 4, 5], "score": 0.75,
                                   "mask_rle": encode_rle(s.instances[0].mask)}
    back = load_instances(tmp_path / "a.json")
    assert back.image_id == "img7" and len(back) == 2
    for a, b in zip(s, back):
        assert a.class_id == b.class_id and a.score == b.score and np.array_equal(a.mask, b.mask)
    assert set(load_instance_dir(tmp_path)) == {"img7"}


def test_instance_json_errors(tmp_path):
    (tmp_path / "bad.json").write_text('{"image_id": "a", ')
    with pytest.raises(DecodeError) as err:
        load_instances(tmp_path / "bad.json")
    assert err.value.offset is not None and "bad.json" in str(err.value)
    with pytest.raises(DecodeError):
        load_instances(tmp_path / "missing.json")


def test_image_roundtrip_within_quantisation(tmp_path):
    g = np.linspace(0, 1, 16).reshape(4, 4, 1)
    write_image(RasterImage(g), tmp_path / "g.png")
    back = read_image(tmp_path / "g.png")
    assert back.data.shape == (4, 4, 1)
    assert np.abs(back.data - g).max() <= 1 / 255


def test_read_solid_rgb(tmp_path):
    from PIL import Image

    Image.new("RGB", (5, 3), (128, 128, 128)).save(tmp_path / "s.png")
    img = read_image(tmp_path / "s.png")
    assert img.data.shape == (3, 5, 3)
    assert np.all(img.data == 128 / 255)


def test_read_errors(tmp_path):
    with pytest.raises(DecodeError):
        read_image(tmp_path / "nope.png")
    (tmp_path / "junk.png").write_bytes(b"\x89PNX garbage")
    with pytest.raises(DecodeError) as err:
        read_image(tmp_path / "junk.png")
    assert err.value.offset is not None


def test_raster_rejects_out_of_range():
    with pytest.raises(ValueError):
        RasterImage(np.full((2, 2, 1), 1.5))
