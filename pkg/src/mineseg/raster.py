"""Images, masks, instances and their on-disk forms.

Images are float64 arrays of shape (H, W, C) with C in {1, 3} and values in
[0, 1]. Masks are boolean (H, W) arrays. Bounding boxes are half-open
``(x_min, y_min, x_max, y_max)`` so that ``width == x_max - x_min``.

RLE strings are comma-separated ``value:count`` runs over the row-major
flattened mask, e.g. ``[[1, 1], [0, 0]] -> "1:2,0:2"``.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, EmptyMask, RleError, ShapeMismatch

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


class ClassId(str, enum.Enum):
    ROAD = "road"
    WALL = "wall"
    ROOF = "roof"
    PEOPLE = "people"
    EQUIPMENT = "equipment"
    CORRIDOR = "corridor"
    # only produced by merge_surrounding
    SURROUNDING = "surrounding"

    def __str__(self) -> str:
        return self.value


RAW_CLASSES = tuple(c for c in ClassId if c is not ClassId.SURROUNDING)
STRUCTURAL_CLASSES = frozenset({ClassId.ROAD, ClassId.WALL, ClassId.ROOF})


@dataclass(frozen=True)
class RasterImage:
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise ShapeMismatch(f"expected HxWx1 or HxWx3, got {data.shape}")
        if data.size and (not np.all(np.isfinite(data)) or data.min() < 0 or data.max() > 1):
            raise ValueError("intensities must lie in [0, 1]")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    def luminance(self) -> np.ndarray:
        """Max-over-channels intensity map, shape (H, W)."""
        return self.data.max(axis=2)


def as_mask(mask) -> np.ndarray:
    m = np.asarray(mask)
    if m.ndim != 2:
        raise ShapeMismatch(f"mask must be 2-D, got shape {m.shape}")
    return m.astype(bool, copy=False)


def tight_bbox(mask) -> tuple[int, int, int, int]:
    m = as_mask(mask)
    rows = np.flatnonzero(m.any(axis=1))
    if rows.size == 0:
        raise EmptyMask("mask has no set pixels")
    cols = np.flatnonzero(m.any(axis=0))
    return int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1


def encode_rle(mask) -> str:
    flat = as_mask(mask).ravel()
    if flat.size == 0:
        return ""
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    starts = np.concatenate(([0], change))
    counts = np.diff(np.concatenate((starts, [flat.size])))
    return ",".join(f"{int(flat[s])}:{int(c)}" for s, c in zip(starts, counts))


def decode_rle(rle: str, width: int, height: int) -> np.ndarray:
    total = width * height
    out = np.zeros(total, dtype=bool)
    pos = 0
    if rle.strip():
        for i, run in enumerate(rle.split(",")):
            try:
                value, count = run.split(":")
                value, count = int(value), int(count)
            except ValueError:
                raise RleError(f"malformed run #{i}: {run!r}") from None
            if value not in (0, 1) or count <= 0:
                raise RleError(f"invalid run #{i}: {run!r}")
            if pos + count > total:
                raise RleError(f"runs exceed {width}x{height} = {total} pixels")
            if value:
                out[pos:pos + count] = True
            pos += count
    if pos != total:
        raise RleError(f"runs cover {pos} pixels, expected {total}")
    return out.reshape(height, width)


@dataclass(frozen=True)
class Instance:
    class_id: ClassId
    mask: np.ndarray
    score: float = 1.0
    bbox: tuple[int, int, int, int] | None = None

    def __post_init__(self):
        m = as_mask(self.mask).copy()
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)
        object.__setattr__(self, "class_id", ClassId(self.class_id))
        box = tight_bbox(m)
        if self.bbox is not None and tuple(self.bbox) != box:
            raise ValueError(f"bbox {tuple(self.bbox)} is not the tight box {box}")
        object.__setattr__(self, "bbox", box)
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        object.__setattr__(self, "score", float(self.score))

    @property
    def area(self) -> int:
        return int(self.mask.sum())

    def with_class(self, class_id) -> "Instance":
        return replace(self, class_id=ClassId(class_id))


@dataclass(frozen=True)
class InstanceSet:
    image_id: str
    width: int
    height: int
    instances: tuple[Instance, ...] = field(default_factory=tuple)

    def __post_init__(self):
        insts = tuple(self.instances)
        for k, inst in enumerate(insts):
            if inst.mask.shape != (self.height, self.width):
                raise ShapeMismatch(
                    f"{self.image_id}: instance {k} mask {inst.mask.shape} "
                    f"!= {(self.height, self.width)}"
                )
        object.__setattr__(self, "instances", insts)

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def with_instances(self, instances: Iterable[Instance]) -> "InstanceSet":
        return replace(self, instances=tuple(instances))

    def class_union(self, class_id) -> np.ndarray:
        out = np.zeros(self.shape, dtype=bool)
        for inst in self.instances:
            if inst.class_id == class_id:
                out |= inst.mask
        return out

    def to_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "width": self.width,
            "height": self.height,
            "instances": [
                {
                    "class": inst.class_id.value,
                    "bbox": list(inst.bbox),
                    "score": inst.score,
                    "mask_rle": encode_rle(inst.mask),
                }
                for inst in self.instances
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "InstanceSet":
        w, h = int(doc["width"]), int(doc["height"])
        insts = []
        for item in doc.get("instances", []):
            mask = decode_rle(item["mask_rle"], w, h)
            bbox = item.get("bbox")
            insts.append(Instance(
                class_id=ClassId(item["class"]),
                mask=mask,
                score=float(item.get("score", 1.0)),
                bbox=tuple(bbox) if bbox is not None else None,
            ))
        return cls(str(doc["image_id"]), w, h, tuple(insts))


def save_instances(iset: InstanceSet, path) -> None:
    Path(path).write_text(json.dumps(iset.to_dict(), indent=1) + "\n")


def load_instances(path) -> InstanceSet:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise DecodeError(path, "no such file") from None
    except json.JSONDecodeError as exc:
        raise DecodeError(path, exc.msg, offset=exc.pos) from None
    try:
        return InstanceSet.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError(path, f"invalid instance document: {exc}") from None


def load_instance_dir(directory) -> dict[str, InstanceSet]:
    """Load every ``*.json`` in ``directory`` keyed by the document's image_id."""
    out: dict[str, InstanceSet] = {}
    for p in sorted(Path(directory).glob("*.json")):
        iset = load_instances(p)
        if iset.image_id in out:
            raise DecodeError(p, f"duplicate image_id {iset.image_id!r}")
        out[iset.image_id] = iset
    return out


def read_image(path) -> RasterImage:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            head = fh.read(8)
    except OSError as exc:
        raise DecodeError(path, exc.strerror or str(exc)) from None
    if path.suffix.lower() == ".png" and head != PNG_SIGNATURE:
        bad = next((i for i, (a, b) in enumerate(zip(head, PNG_SIGNATURE)) if a != b), len(head))
        raise DecodeError(path, "bad PNG signature", offset=bad)
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode in ("L", "RGB"):
                arr = np.asarray(im)
            elif im.mode in ("I;16", "I;16B", "I"):
                arr = np.asarray(im).astype(np.float64) / 65535.0
                return RasterImage(np.clip(arr, 0, 1))
            elif im.mode in ("LA", "1"):
                arr = np.asarray(im.convert("L"))
            else:
                arr = np.asarray(im.convert("RGB"))
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(path, str(exc)) from None
    return RasterImage(arr.astype(np.float64) / 255.0)


def to_uint8(data: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(data) * 255.0), 0, 255).astype(np.uint8)


def write_image(image: RasterImage | np.ndarray, path) -> None:
    data = image.data if isinstance(image, RasterImage) else np.asarray(image)
    if data.ndim == 3 and data.shape[2] == 1:
        data = data[:, :, 0]
    # fixed encoder settings keep the bytes stable across runs
    Image.fromarray(to_uint8(data)).save(path, format="PNG", optimize=False, compress_level=6)


def list_images(directory) -> list[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.suffix.lower() == ".png")


def ensure_dir(path) -> Path:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    return p


def mask_iou(a, b) -> float:
    a, b = as_mask(a), as_mask(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    union = np.count_nonzero(a | b)
    return np.count_nonzero(a & b) / union if union else 0.0
