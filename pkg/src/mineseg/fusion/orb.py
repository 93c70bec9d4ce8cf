"""Oriented FAST + rotated BRIEF features and Hamming matching, in numpy.

Detection runs on an image pyramid. Each level finds FAST-9 corners,
keeps the strongest by Harris response after 3x3 non-maximum suppression,
orients them by the intensity centroid of a radius-15 disc, and samples a
256-bit descriptor from a Gaussian-smoothed copy of the level using the
frozen test pairs in ``_brief_pattern`` rotated by the keypoint angle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy import ndimage

from ..errors import InsufficientMatches
from ..raster import RasterImage
from ._brief_pattern import PAIRS

PATCH_RADIUS = 15
BORDER = PATCH_RADIUS + 1
HARRIS_K = 0.04
HARRIS_BLOCK = 7
BRIEF_SIGMA = 2.0
MIN_MATCHES = 4

# Bresenham circle of radius 3, clockwise from 12 o'clock, as (dx, dy)
FAST_CIRCLE = np.array([
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
])
FAST_ARC = 9

_PAIRS = np.asarray(PAIRS, dtype=np.float64)
_dy, _dx = np.mgrid[-PATCH_RADIUS:PATCH_RADIUS + 1, -PATCH_RADIUS:PATCH_RADIUS + 1]
_disc = _dx**2 + _dy**2 <= PATCH_RADIUS**2
DISC_DX, DISC_DY = _dx[_disc], _dy[_disc]

POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)


@dataclass(frozen=True)
class OrbFeature:
    x: float
    y: float
    angle: float
    descriptor: np.ndarray  # 32 packed bytes = 256 bits
    level: int = 0
    response: float = 0.0


@dataclass(frozen=True)
class OrbFeatures:
    """Column-oriented feature list; coordinates are in level-0 pixels."""

    xy: np.ndarray
    angle: np.ndarray
    descriptors: np.ndarray
    level: np.ndarray
    response: np.ndarray

    def __len__(self) -> int:
        return len(self.xy)

    def __getitem__(self, i: int) -> OrbFeature:
        return OrbFeature(float(self.xy[i, 0]), float(self.xy[i, 1]), float(self.angle[i]),
                          self.descriptors[i], int(self.level[i]), float(self.response[i]))

    def as_list(self) -> list[OrbFeature]:
        return [self[i] for i in range(len(self))]

    @classmethod
    def empty(cls) -> "OrbFeatures":
        return cls(np.zeros((0, 2)), np.zeros(0), np.zeros((0, 32), np.uint8),
                   np.zeros(0, int), np.zeros(0))

    @classmethod
    def concat(cls, parts: list["OrbFeatures"]) -> "OrbFeatures":
        if not parts:
            return cls.empty()
        return cls(*(np.concatenate([getattr(p, f) for p in parts])
                     for f in ("xy", "angle", "descriptors", "level", "response")))


def fast_corners(img: np.ndarray, threshold: float) -> np.ndarray:
    """Boolean map of FAST-9 corners (>= 9 contiguous circle pixels all brighter or all darker)."""
    h, w = img.shape
    out = np.zeros((h, w), dtype=bool)
    if h < 7 or w < 7:
        return out
    centre = img[3:h - 3, 3:w - 3]
    ring = np.stack([img[3 + dy:h - 3 + dy, 3 + dx:w - 3 + dx] for dx, dy in FAST_CIRCLE])
    for side in (ring > centre + threshold, ring < centre - threshold):
        arc = side.copy()
        for k in range(1, FAST_ARC):
            arc &= np.roll(side, -k, axis=0)
        out[3:h - 3, 3:w - 3] |= arc.any(axis=0)
    return out


def harris_response(img: np.ndarray) -> np.ndarray:
    ix = ndimage.sobel(img, axis=1, mode="nearest")
    iy = ndimage.sobel(img, axis=0, mode="nearest")
    a = ndimage.uniform_filter(ix * ix, HARRIS_BLOCK, mode="nearest")
    b = ndimage.uniform_filter(iy * iy, HARRIS_BLOCK, mode="nearest")
    c = ndimage.uniform_filter(ix * iy, HARRIS_BLOCK, mode="nearest")
    return a * b - c * c - HARRIS_K * (a + b) ** 2


def intensity_centroid_angle(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    vals = img[ys[:, None] + DISC_DY[None], xs[:, None] + DISC_DX[None]]
    m10 = (vals * DISC_DX).sum(axis=1)
    m01 = (vals * DISC_DY).sum(axis=1)
    return np.arctan2(m01, m10)


def steered_brief(smooth: np.ndarray, xs: np.ndarray, ys: np.ndarray, angles: np.ndarray) -> np.ndarray:
    c, s = np.cos(angles)[:, None], np.sin(angles)[:, None]
    x1, y1, x2, y2 = (_PAIRS[:, i][None] for i in range(4))

    def sample(px, py):
        rx = np.floor(c * px - s * py + 0.5).astype(int)
        ry = np.floor(s * px + c * py + 0.5).astype(int)
        return smooth[ys[:, None] + ry, xs[:, None] + rx]

    bits = sample(x1, y1) < sample(x2, y2)
    return np.packbits(bits, axis=1)


def _resize(img: np.ndarray, width: int, height: int) -> np.ndarray:
    im = Image.fromarray(img.astype(np.float32), mode="F")
    return np.asarray(im.resize((width, height), Image.BILINEAR), dtype=np.float64)


def build_pyramid(img: np.ndarray, n_levels: int, scale_factor: float) -> list[np.ndarray]:
    levels = [img]
    h, w = img.shape
    for l in range(1, n_levels):
        s = scale_factor**l
        lw, lh = int(round(w / s)), int(round(h / s))
        if min(lw, lh) <= 2 * BORDER + 1:
            break
        levels.append(_resize(img, lw, lh))
    return levels


def _level_features(img: np.ndarray, budget: int, threshold: float) -> tuple:
    h, w = img.shape
    corners = fast_corners(img, threshold)
    corners[:BORDER] = corners[h - BORDER:] = False
    corners[:, :BORDER] = corners[:, w - BORDER:] = False
    if budget <= 0 or not corners.any():
        return None
    resp = harris_response(img)
    scored = np.where(corners, resp, -np.inf)
    peaks = corners & (ndimage.maximum_filter(scored, size=3, mode="constant", cval=-np.inf) == scored)
    ys, xs = np.nonzero(peaks)
    r = resp[ys, xs]
    # strongest first; ties broken by raster order for determinism
    order = np.lexsort((xs, ys, -r))[:budget]
    ys, xs, r = ys[order], xs[order], r[order]
    angles = intensity_centroid_angle(img, xs, ys)
    smooth = ndimage.gaussian_filter(img, BRIEF_SIGMA, mode="nearest")
    desc = steered_brief(smooth, xs, ys, angles)
    return xs, ys, r, angles, desc


def detect_orb(image: RasterImage | np.ndarray, max_features: int = 500, fast_threshold: float = 0.08,
               n_levels: int = 5, scale_factor: float = 1.2) -> OrbFeatures:
    """Detect up to ``max_features`` ORB features; 3-channel input uses the max channel."""
    if isinstance(image, RasterImage):
        img = image.luminance()
    else:
        img = np.asarray(image, dtype=np.float64)
        if img.ndim == 3:
            img = img.max(axis=2)
    pyramid = build_pyramid(img, n_levels, scale_factor)
    # per-level budget proportional to level area, as in the usual ORB scheme
    areas = np.array([lvl.size for lvl in pyramid], dtype=float)
    budgets = np.floor(max_features * areas / areas.sum()).astype(int)
    budgets[0] += max_features - budgets.sum()
    parts = []
    for l, (lvl, budget) in enumerate(zip(pyramid, budgets)):
        found = _level_features(lvl, int(budget), fast_threshold)
        if found is None:
            continue
        xs, ys, r, angles, desc = found
        sx, sy = img.shape[1] / lvl.shape[1], img.shape[0] / lvl.shape[0]
        xy = np.stack([(xs + 0.5) * sx - 0.5, (ys + 0.5) * sy - 0.5], axis=1)
        parts.append(OrbFeatures(xy, angles, desc, np.full(len(xs), l), r))
    return OrbFeatures.concat(parts)


def hamming_matrix(da: np.ndarray, db: np.ndarray) -> np.ndarray:
    x = np.bitwise_xor(da[:, None, :], db[None, :, :])
    return POPCOUNT[x].sum(axis=2, dtype=np.int32)


def match_features(a: OrbFeatures | np.ndarray, b: OrbFeatures | np.ndarray,
                   match_ratio: float = 0.75, min_matches: int = MIN_MATCHES) -> list[tuple[int, int]]:
    """Brute-force Hamming matching with a ratio test and mutual-best filtering.

    Accepts feature sets or raw (N, 32) packed descriptor arrays. Raises
    ``InsufficientMatches`` when fewer than ``min_matches`` pairs survive.
    """
    da = a.descriptors if isinstance(a, OrbFeatures) else np.asarray(a, dtype=np.uint8)
    db = b.descriptors if isinstance(b, OrbFeatures) else np.asarray(b, dtype=np.uint8)
    if len(da) == 0 or len(db) == 0:
        raise InsufficientMatches("empty feature list")
    d = hamming_matrix(da, db)
    best_b = np.argmin(d, axis=1)
    best_a = np.argmin(d, axis=0)
    d1 = d[np.arange(len(da)), best_b]
    if d.shape[1] > 1:
        d2 = np.partition(d, 1, axis=1)[:, 1]
    else:
        d2 = np.full(len(da), np.iinfo(np.int32).max)
    ok = (d1 < match_ratio * d2) & (best_a[best_b] == np.arange(len(da)))
    pairs = [(int(i), int(best_b[i])) for i in np.flatnonzero(ok)]
    if len(pairs) < min_matches:
        raise InsufficientMatches(f"{len(pairs)} matches survive, need {min_matches}")
    return pairs
