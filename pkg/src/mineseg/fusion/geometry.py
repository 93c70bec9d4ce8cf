"""Similarity transforms, RANSAC estimation and nearest-neighbour mask warping.

Points are (x, y) pixel-centre coordinates. Internally a similarity is the
complex map ``w = z * v + t`` with ``z = s * exp(i * theta)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import AlignmentFailed, InsufficientMatches

SCALE_RANGE = (0.5, 2.0)
MIN_INLIER_RATIO = 0.3


class TransformKind(str, enum.Enum):
    IDENTITY = "Identity"
    SIMILARITY = "Similarity"


@dataclass(frozen=True)
class PlanarTransform:
    scale: float = 1.0
    theta: float = 0.0
    tx: float = 0.0
    ty: float = 0.0
    kind: TransformKind = TransformKind.IDENTITY

    def __post_init__(self):
        object.__setattr__(self, "kind", TransformKind(self.kind))
        if not self.scale > 0:
            raise ValueError("scale must be > 0")

    @classmethod
    def identity(cls) -> "PlanarTransform":
        return cls()

    @classmethod
    def similarity(cls, scale=1.0, theta=0.0, tx=0.0, ty=0.0) -> "PlanarTransform":
        return cls(float(scale), float(theta), float(tx), float(ty), TransformKind.SIMILARITY)

    @classmethod
    def translation(cls, tx, ty) -> "PlanarTransform":
        return cls.similarity(1.0, 0.0, tx, ty)

    @classmethod
    def from_complex(cls, z: complex, t: complex) -> "PlanarTransform":
        return cls.similarity(abs(z), math.atan2(z.imag, z.real), t.real, t.imag)

    @property
    def z(self) -> complex:
        return self.scale * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def t(self) -> complex:
        return complex(self.tx, self.ty)

    def matrix(self) -> np.ndarray:
        c, s = self.scale * math.cos(self.theta), self.scale * math.sin(self.theta)
        return np.array([[c, -s, self.tx], [s, c, self.ty], [0.0, 0.0, 1.0]])

    def apply(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64)
        v = pts[..., 0] + 1j * pts[..., 1]
        w = self.z * v + self.t
        return np.stack([w.real, w.imag], axis=-1)

    def inverse(self) -> "PlanarTransform":
        if self.kind is TransformKind.IDENTITY:
            return self
        zi = 1.0 / self.z
        return PlanarTransform.from_complex(zi, -zi * self.t)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "scale": self.scale, "theta": self.theta,
                "tx": self.tx, "ty": self.ty}


def fit_similarity(a: np.ndarray, b: np.ndarray) -> tuple[complex, complex]:
    """Least-squares similarity taking points ``a`` onto ``b`` (both (N, 2), N >= 2)."""
    va = a[:, 0] + 1j * a[:, 1]
    vb = b[:, 0] + 1j * b[:, 1]
    ma, mb = va.mean(), vb.mean()
    ca, cb = va - ma, vb - mb
    den = float(np.sum(np.abs(ca) ** 2))
    if den == 0.0:
        raise AlignmentFailed("degenerate point set")
    z = complex(np.sum(np.conj(ca) * cb) / den)
    return z, complex(mb - z * ma)


def estimate_transform(matches, a_xy, b_xy, iters: int = 1000, inlier_px: float = 3.0,
                       seed: int = 0) -> tuple[PlanarTransform, np.ndarray]:
    """RANSAC over two-point similarity hypotheses, refit on the best consensus set.

    ``a_xy``/``b_xy`` are feature coordinates indexed by the ``(ia, ib)``
    pairs in ``matches``. Returns the transform (A frame -> B frame) and the
    boolean inlier mask over ``matches``.
    """
    matches = np.asarray(matches, dtype=int).reshape(-1, 2)
    m = len(matches)
    if m < 4:
        raise InsufficientMatches(f"{m} matches, need 4")
    a = np.asarray(a_xy, dtype=np.float64)[matches[:, 0]]
    b = np.asarray(b_xy, dtype=np.float64)[matches[:, 1]]
    va = a[:, 0] + 1j * a[:, 1]
    vb = b[:, 0] + 1j * b[:, 1]

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), m])))
    i = rng.integers(0, m, size=iters)
    j = (i + rng.integers(1, m, size=iters)) % m
    da = va[j] - va[i]
    good = np.abs(da) > 1e-9
    z = np.where(good, (vb[j] - vb[i]) / np.where(good, da, 1), 0)
    t = vb[i] - z * va[i]
    err = np.abs(z[:, None] * va[None, :] + t[:, None] - vb[None, :])
    counts = np.where(good, (err < inlier_px).sum(axis=1), -1)
    best = int(np.argmax(counts))
    inliers = err[best] < inlier_px

    # refit until the consensus set stops changing
    for _ in range(10):
        if inliers.sum() < 2:
            break
        zf, tf = fit_similarity(a[inliers], b[inliers])
        new = np.abs(zf * va + tf - vb) < inlier_px
        if new.sum() < 2 or np.array_equal(new, inliers):
            inliers = new if new.sum() >= 2 else inliers
            break
        inliers = new
    if inliers.sum() < 2:
        raise AlignmentFailed("no consensus")
    zf, tf = fit_similarity(a[inliers], b[inliers])
    ratio = inliers.sum() / m
    est = PlanarTransform.from_complex(zf, tf)
    if ratio < MIN_INLIER_RATIO:
        raise AlignmentFailed(f"inlier ratio {ratio:.2f} < {MIN_INLIER_RATIO}")
    if not SCALE_RANGE[0] <= est.scale <= SCALE_RANGE[1]:
        raise AlignmentFailed(f"scale {est.scale:.3f} outside {SCALE_RANGE}")
    return est, inliers


def warp_mask(mask: np.ndarray, t: PlanarTransform, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Resample ``mask`` into the target frame of ``t`` by inverse nearest-neighbour lookup."""
    mask = np.asarray(mask, dtype=bool)
    if t.kind is TransformKind.IDENTITY and (shape is None or shape == mask.shape):
        return mask.copy()
    h, w = shape or mask.shape
    ys, xs = np.mgrid[0:h, 0:w]
    src = t.inverse().apply(np.stack([xs, ys], axis=-1).astype(np.float64))
    sx = np.floor(src[..., 0] + 0.5).astype(np.int64)
    sy = np.floor(src[..., 1] + 0.5).astype(np.int64)
    inside = (sx >= 0) & (sx < mask.shape[1]) & (sy >= 0) & (sy < mask.shape[0])
    out = np.zeros((h, w), dtype=bool)
    out[inside] = mask[sy[inside], sx[inside]]
    return out


def corner_reprojection_error(est: PlanarTransform, truth: PlanarTransform, width: int, height: int) -> float:
    corners = np.array([[0, 0], [width - 1, 0], [0, height - 1], [width - 1, height - 1]], dtype=float)
    return float(np.linalg.norm(est.apply(corners) - truth.apply(corners), axis=1).mean())
