"""Deterministic synthetic fixtures: textured images and mine-like scenes."""

from __future__ import annotations

import math

import numpy as np
from PIL import Image, ImageDraw
from scipy import ndimage

from .dataset import philox
from .fusion.geometry import PlanarTransform
from .raster import ClassId, Instance, InstanceSet, RasterImage


def polygon_mask(shape: tuple[int, int], vertices) -> np.ndarray:
    h, w = shape
    canvas = Image.new("L", (w, h), 0)
    ImageDraw.Draw(canvas).polygon([tuple(map(float, v)) for v in vertices], fill=1)
    return np.asarray(canvas, dtype=bool)


def random_polygon(rng: np.random.Generator, cx: float, cy: float, radius: float, n_min=3, n_max=7):
    n = int(rng.integers(n_min, n_max + 1))
    angles = np.sort(rng.uniform(0, 2 * math.pi, n))
    radii = radius * rng.uniform(0.5, 1.0, n)
    return np.stack([cx + radii * np.cos(angles), cy + radii * np.sin(angles)], axis=1)


def textured_image(seed: int, size: int = 256, n_shapes: int = 40) -> np.ndarray:
    """Overlapping random polygons of random grey levels, lightly blurred."""
    rng = philox(seed, 0x7E57)
    img = np.full((size, size), rng.uniform(0.1, 0.3))
    for _ in range(n_shapes):
        poly = random_polygon(rng, *rng.uniform(0, size, 2), rng.uniform(size / 20, size / 6))
        img[polygon_mask(img.shape, poly)] = rng.uniform(0.0, 1.0)
    return ndimage.gaussian_filter(img, 0.8, mode="nearest")


def warp_image(img: np.ndarray, t: PlanarTransform) -> np.ndarray:
    """Bilinear warp of a grey image into the target frame of ``t`` (zero fill)."""
    inv = t.inverse().matrix()
    # ndimage works in (row, col); swap axes of the inverse affine
    m = np.array([[inv[1, 1], inv[1, 0]], [inv[0, 1], inv[0, 0]]])
    off = np.array([inv[1, 2], inv[0, 2]])
    return ndimage.affine_transform(img, m, offset=off, order=1, mode="constant", cval=0.0)


def random_similarity(rng: np.random.Generator, size: int, max_deg=15.0, max_shift=20.0,
                      scale_range=(0.8, 1.25)) -> PlanarTransform:
    """Similarity about the image centre with the given parameter bounds."""
    s = math.exp(rng.uniform(math.log(scale_range[0]), math.log(scale_range[1])))
    theta = math.radians(rng.uniform(-max_deg, max_deg))
    shift = rng.uniform(-max_shift, max_shift, 2)
    c = (size - 1) / 2.0
    z = s * complex(math.cos(theta), math.sin(theta))
    centre = complex(c, c)
    t = centre - z * centre + complex(*shift)
    return PlanarTransform.from_complex(z, t)


# grey level of each class in scene renderings
CLASS_SHADE = {
    ClassId.ROAD: 0.45,
    ClassId.WALL: 0.30,
    ClassId.ROOF: 0.60,
    ClassId.PEOPLE: 0.95,
    ClassId.EQUIPMENT: 0.80,
    ClassId.CORRIDOR: 0.15,
}


def scene_instances(seed: int, image_id: str, width: int = 192, height: int = 192) -> InstanceSet:
    """Mine-like ground truth: road along the bottom, roof on top, walls at the
    sides and people/equipment/corridor objects in between.

    Walls and roofs stay clear of the bottom grid row and roads sit inside
    it, so the layout is already consistent with the default grid rule.
    """
    rng = philox(seed, 0x5CE)
    shape = (height, width)
    bottom = height * 3 // 4
    insts = []

    def add(cls, poly):
        m = polygon_mask(shape, poly)
        if m.any():
            insts.append(Instance(cls, m, 1.0))

    # road: trapezoid within the bottom row
    y0 = bottom + rng.uniform(2, 8)
    insts_x = rng.uniform(0.05, 0.2) * width
    add(ClassId.ROAD, [(insts_x, y0), (width - insts_x * rng.uniform(0.6, 1.4), y0 + rng.uniform(-2, 2)),
                       (width - 2, height - 2), (1, height - 2)])
    # roof: irregular band across the top
    add(ClassId.ROOF, [(rng.uniform(5, 25), 2), (width - rng.uniform(5, 25), 2),
                       (width * rng.uniform(0.7, 0.85), rng.uniform(18, 30)),
                       (width * rng.uniform(0.45, 0.55), rng.uniform(25, 38)),
                       (width * rng.uniform(0.15, 0.3), rng.uniform(18, 30))])
    # walls: left and right slabs between roof and road
    add(ClassId.WALL, [(2, rng.uniform(45, 55)), (rng.uniform(22, 32), rng.uniform(48, 60)),
                       (rng.uniform(26, 36), bottom - rng.uniform(6, 14)), (2, bottom - rng.uniform(4, 10))])
    add(ClassId.WALL, [(width - 2, rng.uniform(45, 55)), (width - rng.uniform(22, 32), rng.uniform(50, 62)),
                       (width - rng.uniform(28, 38), bottom - rng.uniform(6, 14)),
                       (width - 2, bottom - rng.uniform(4, 10))])
    # free-standing objects in the middle band
    slots = [(width * f, height * g) for f in (0.35, 0.5, 0.65) for g in (0.4, 0.6)]
    order = rng.permutation(len(slots))
    kinds = [ClassId.CORRIDOR, ClassId.PEOPLE, ClassId.EQUIPMENT, ClassId.PEOPLE, ClassId.EQUIPMENT]
    for cls, k in zip(kinds, order):
        cx, cy = slots[k]
        cx += rng.uniform(-4, 4)
        cy += rng.uniform(-4, 4)
        r = {ClassId.CORRIDOR: 16, ClassId.PEOPLE: 11, ClassId.EQUIPMENT: 14}[cls]
        add(cls, random_polygon(rng, cx, cy, r * rng.uniform(0.9, 1.2), 4, 7))
    return InstanceSet(image_id, width, height, tuple(insts))


def render_scene(gt: InstanceSet, seed: int, light: float = 0.25, noise: float = 0.01) -> RasterImage:
    """Low-light RGB rendering of a ground-truth scene with mild texture."""
    rng = philox(seed, 0x1A6)
    base = np.full(gt.shape, 0.25)
    for inst in gt:
        base[inst.mask] = CLASS_SHADE[inst.class_id]
    tint = np.array([1.0, 0.95, 0.85])
    img = ndimage.gaussian_filter(base, 0.7)[:, :, None] * tint[None, None, :]
    ys = np.linspace(0.6, 1.0, gt.height)[:, None, None]
    img = img * light * ys + rng.normal(0.0, noise, img.shape)
    return RasterImage(np.clip(img, 0.0, 1.0))
