"""Synthetic low-light degradation and automatic frame filtering."""

from __future__ import annotations

import enum
import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .raster import RasterImage


def philox(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based Philox-4x64 generator keyed by ``seed`` and ``stream``.

    All stochastic steps go through this so outputs are portable across
    platforms for a fixed numpy release.
    """
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), *[int(s) & (2**32 - 1) for s in stream]])
    return np.random.Generator(np.random.Philox(ss))


def name_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


@dataclass(frozen=True)
class DegradeConfig:
    seed: int = 0
    noise_sigma: float = 0.05
    brightness_factor: float = 0.3
    contrast_factor: float = 1.3

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0 < self.brightness_factor <= 1:
            raise ValueError("brightness_factor must be in (0, 1]")
        if self.contrast_factor < 1:
            raise ValueError("contrast_factor must be >= 1")


def degrade(image: RasterImage, cfg: DegradeConfig = DegradeConfig(), stream: int | None = None) -> RasterImage:
    """Darken, stretch contrast about the mean, and add Gaussian noise.

    ``stream`` selects an independent noise stream under the same seed (the
    batch CLI passes a hash of the file name).
    """
    dark = image.data * cfg.brightness_factor
    mean = dark.mean()
    out = (dark - mean) * cfg.contrast_factor + mean
    if cfg.noise_sigma > 0:
        rng = philox(cfg.seed) if stream is None else philox(cfg.seed, stream)
        out = out + rng.normal(0.0, cfg.noise_sigma, size=out.shape)
    return RasterImage(np.clip(out, 0.0, 1.0))


class Reason(str, enum.Enum):
    TOO_DARK = "TooDark"
    BLURRED = "Blurred"
    DUPLICATE = "Duplicate"


@dataclass(frozen=True)
class FilterConfig:
    dark_threshold: float = 0.04
    blur_threshold: float = 1e-4
    dup_hash_distance: int = 5

    def __post_init__(self):
        if min(self.dark_threshold, self.blur_threshold, self.dup_hash_distance) < 0:
            raise ValueError("filter thresholds must be >= 0")


@dataclass(frozen=True)
class FilterVerdict:
    reasons: tuple[Reason, ...] = ()
    mean_luminance: float = 0.0
    laplacian_variance: float = 0.0
    ahash: int = 0

    @property
    def keep(self) -> bool:
        return not self.reasons

    def to_dict(self) -> dict:
        return {
            "keep": self.keep,
            "reasons": [r.value for r in self.reasons],
            "mean_luminance": self.mean_luminance,
            "laplacian_variance": self.laplacian_variance,
            "ahash": f"{self.ahash:016x}",
        }


LAPLACIAN_3x3 = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=np.float64)


def laplacian_variance(lum: np.ndarray) -> float:
    return float(ndimage.convolve(lum, LAPLACIAN_3x3, mode="nearest").var())


def _block_mean(lum: np.ndarray, size: int) -> np.ndarray:
    # area averaging onto a size x size grid with fractional pixel coverage
    h, w = lum.shape

    def weights(n):
        edges = np.linspace(0, n, size + 1)
        px = np.arange(n)
        lo = np.clip(edges[:-1, None], px, px + 1)
        hi = np.clip(edges[1:, None], px, px + 1)
        wt = hi - lo
        return wt / wt.sum(axis=1, keepdims=True)

    return weights(h) @ lum @ weights(w).T


def average_hash(lum: np.ndarray) -> int:
    """64-bit average hash: 8x8 area-averaged thumbnail thresholded at its mean."""
    thumb = _block_mean(lum, 8)
    bits = (thumb > thumb.mean()).ravel()
    return int(sum(1 << i for i, b in enumerate(bits) if b))


def hamming64(a: int, b: int) -> int:
    return bin(a ^ b).count("1")


@dataclass
class HashSet:
    """Seen average hashes; duplicates are judged against everything added so far."""

    hashes: list[int] = field(default_factory=list)

    def nearest(self, h: int) -> int | None:
        return min((hamming64(h, s) for s in self.hashes), default=None)

    def add(self, h: int) -> None:
        self.hashes.append(h)


def filter_image(image: RasterImage, cfg: FilterConfig = FilterConfig(),
                 seen_hashes: HashSet | None = None) -> FilterVerdict:
    """Judge one frame; the frame's hash is added to ``seen_hashes``.

    Luminance is the max-over-channels map. Only the duplicate check depends
    on the order frames are submitted in.
    """
    lum = image.luminance()
    mean = float(lum.mean())
    lap = laplacian_variance(lum)
    h = average_hash(lum)
    reasons = []
    if mean < cfg.dark_threshold:
        reasons.append(Reason.TOO_DARK)
    if lap < cfg.blur_threshold:
        reasons.append(Reason.BLURRED)
    if seen_hashes is not None:
        d = seen_hashes.nearest(h)
        if d is not None and d <= cfg.dup_hash_distance:
            reasons.append(Reason.DUPLICATE)
        seen_hashes.add(h)
    return FilterVerdict(tuple(reasons), mean, lap, h)
