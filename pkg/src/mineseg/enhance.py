"""Retinex-style low-light enhancement.

The image is split into a single-channel illumination map and a
per-channel reflectance, the illumination is brightened with a gamma curve,
and the two are multiplied back together.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .raster import RasterImage


@dataclass(frozen=True)
class EnhanceConfig:
    eps_floor: float = 1e-3
    smoothing_radius: int = 15
    gamma: float = 2.2
    target_mean: float | None = None
    denoise_reflectance: bool = False

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.smoothing_radius < 1:
            raise ValueError("smoothing_radius must be >= 1")
        if not 0 < self.eps_floor < 1:
            raise ValueError("eps_floor must be in (0, 1)")
        if self.target_mean is not None and not 0 < self.target_mean <= 1:
            raise ValueError("target_mean must be in (0, 1]")


class IlluminationPair(NamedTuple):
    reflectance: RasterImage
    illumination: RasterImage


GAMMA_BRACKET = (1.0, 10.0)


def smooth_illumination(lum: np.ndarray, radius: int) -> np.ndarray:
    # The max filter before the box filter keeps the smoothed map >= lum at
    # every pixel, so reflectance never needs clipping above 1.
    size = 2 * radius + 1
    peak = ndimage.maximum_filter(lum, size=size, mode="nearest")
    return ndimage.uniform_filter(peak, size=size, mode="nearest")


def decompose(image: RasterImage, cfg: EnhanceConfig = EnhanceConfig()) -> IlluminationPair:
    lum = image.luminance()
    illum = np.clip(smooth_illumination(lum, cfg.smoothing_radius), cfg.eps_floor, 1.0)
    # uniform_filter rounding can leave illum a few ulps under lum
    illum = np.maximum(illum, lum)
    refl = np.clip(image.data / illum[:, :, None], 0.0, 1.0)
    return IlluminationPair(RasterImage(refl), RasterImage(illum))


def recombine(reflectance: RasterImage, illumination: RasterImage) -> RasterImage:
    out = reflectance.data * illumination.data[:, :, :1]
    return RasterImage(np.clip(out, 0.0, 1.0))


def gamma_curve(illum: np.ndarray, gamma: float) -> np.ndarray:
    return np.power(illum, 1.0 / gamma)


def solve_gamma(illum: np.ndarray, target_mean: float, tol: float = 1e-6,
                bracket: tuple[float, float] = GAMMA_BRACKET, max_iter: int = 200) -> float:
    """Bisection for the gamma whose curve lifts ``mean(illum)`` to ``target_mean``.

    The mean of ``illum ** (1/g)`` increases with g on (0, 1], so the search
    stops at a bracket end when the target is out of reach.
    """
    lo, hi = bracket
    f = lambda g: float(gamma_curve(illum, g).mean()) - target_mean
    if f(lo) >= 0:
        return lo
    if f(hi) <= 0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if abs(val) <= tol:
            return mid
        if val < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def adjust_illumination(illum: RasterImage, cfg: EnhanceConfig = EnhanceConfig()) -> RasterImage:
    data = illum.data
    gamma = cfg.gamma if cfg.target_mean is None else solve_gamma(data, cfg.target_mean)
    return RasterImage(np.clip(gamma_curve(data, gamma), 0.0, 1.0))


def restore_reflectance(refl: RasterImage, cfg: EnhanceConfig) -> RasterImage:
    if not cfg.denoise_reflectance:
        return refl
    out = np.stack(
        [ndimage.median_filter(refl.data[:, :, c], size=3, mode="nearest")
         for c in range(refl.channels)],
        axis=2,
    )
    return RasterImage(out)


def enhance(image: RasterImage, cfg: EnhanceConfig = EnhanceConfig()) -> RasterImage:
    pair = decompose(image, cfg)
    refl = restore_reflectance(pair.reflectance, cfg)
    return recombine(refl, adjust_illumination(pair.illumination, cfg))


def neighbor_variation(plane: np.ndarray) -> float:
    """Mean absolute difference between 4-connected neighbours."""
    dx = np.abs(np.diff(plane, axis=1))
    dy = np.abs(np.diff(plane, axis=0))
    n = dx.size + dy.size
    return float((dx.sum() + dy.sum()) / n) if n else 0.0
