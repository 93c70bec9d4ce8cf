"""Fusing two models' instance predictions for the same image.

Model B's frame is the reference. A single similarity transform taking A's
frame onto B's is estimated by matching ORB features between renderings of
the two prediction sets; each A instance is warped by it, paired with the
B instance of the same class it overlaps most, intersected, and closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ..errors import AlignmentFailed, InsufficientMatches, ShapeMismatch
from ..raster import ClassId, Instance, InstanceSet, RasterImage, mask_iou
from .geometry import PlanarTransform, estimate_transform, warp_mask
from .morphology import close
from .orb import detect_orb, match_features

DEFAULT_RULE_CLASSES = (ClassId.WALL, ClassId.ROOF, ClassId.ROAD)

# grey level per class when rendering a prediction set for feature detection
RENDER_SHADE = {
    ClassId.CORRIDOR: 0.2,
    ClassId.WALL: 0.35,
    ClassId.ROAD: 0.5,
    ClassId.SURROUNDING: 0.5,
    ClassId.ROOF: 0.65,
    ClassId.EQUIPMENT: 0.8,
    ClassId.PEOPLE: 1.0,
}
RENDER_BLUR = 1.0


@dataclass(frozen=True)
class FusionConfig:
    max_features: int = 500
    fast_threshold: float = 0.08
    pyramid_levels: int = 5
    pyramid_scale: float = 1.2
    match_ratio: float = 0.75
    ransac_iters: int = 1000
    ransac_inlier_px: float = 3.0
    seed: int = 0
    pair_iou_min: float = 0.5
    keep_unmatched: bool = False
    struct_elem: int = 5
    grid_rows: int = 4
    grid_cols: int = 4
    grid_row_fraction: float = 0.3
    grid_rule_classes: tuple[ClassId, ...] = DEFAULT_RULE_CLASSES
    align: bool = True
    symmetric_paper_mode: bool = False

    def __post_init__(self):
        object.__setattr__(self, "grid_rule_classes", tuple(ClassId(c) for c in self.grid_rule_classes))
        if self.struct_elem < 1 or self.struct_elem % 2 == 0:
            raise ValueError("struct_elem must be odd and >= 1")
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ValueError("grid dimensions must be >= 1")
        if not 0 < self.grid_row_fraction <= 1:
            raise ValueError("grid_row_fraction must be in (0, 1]")
        if not 0 < self.match_ratio <= 1:
            raise ValueError("match_ratio must be in (0, 1]")
        if self.max_features < 1 or self.ransac_iters < 1 or self.ransac_inlier_px <= 0:
            raise ValueError("max_features, ransac_iters and ransac_inlier_px must be positive")
        if not 0 <= self.pair_iou_min <= 1:
            raise ValueError("pair_iou_min must be in [0, 1]")


@dataclass
class AlignmentInfo:
    transform: PlanarTransform = field(default_factory=PlanarTransform.identity)
    fallback: str | None = None
    n_features: tuple[int, int] = (0, 0)
    n_matches: int = 0
    n_inliers: int = 0

    def to_dict(self) -> dict:
        return {
            "transform": self.transform.to_dict(),
            "fallback": self.fallback,
            "n_features": list(self.n_features),
            "n_matches": self.n_matches,
            "n_inliers": self.n_inliers,
        }


@dataclass
class FusionResult:
    fused: InstanceSet
    alignment: AlignmentInfo
    pairs: list[tuple[int, int]]


def render_instances(iset: InstanceSet) -> np.ndarray:
    """Stack all masks into one grey image (later instances on top), lightly blurred."""
    canvas = np.zeros(iset.shape)
    for inst in iset:
        canvas[inst.mask] = RENDER_SHADE[inst.class_id]
    return ndimage.gaussian_filter(canvas, RENDER_BLUR, mode="nearest")


def align_images(img_a: np.ndarray, img_b: np.ndarray, cfg: FusionConfig = FusionConfig()) -> AlignmentInfo:
    """Similarity taking ``img_a``'s frame onto ``img_b``'s, or identity with the failure recorded."""
    info = AlignmentInfo()
    kw = dict(max_features=cfg.max_features, fast_threshold=cfg.fast_threshold,
              n_levels=cfg.pyramid_levels, scale_factor=cfg.pyramid_scale)
    fa = detect_orb(img_a, **kw)
    fb = detect_orb(img_b, **kw)
    info.n_features = (len(fa), len(fb))
    try:
        matches = match_features(fa, fb, cfg.match_ratio)
        info.n_matches = len(matches)
        est, inliers = estimate_transform(matches, fa.xy, fb.xy, cfg.ransac_iters,
                                          cfg.ransac_inlier_px, cfg.seed)
    except (InsufficientMatches, AlignmentFailed) as exc:
        info.fallback = f"{type(exc).__name__}: {exc}"
        return info
    info.transform = est
    info.n_inliers = int(inliers.sum())
    return info


def estimate_alignment(set_a: InstanceSet, set_b: InstanceSet, cfg: FusionConfig) -> AlignmentInfo:
    """Align the two prediction sets through their renderings."""
    if not cfg.align:
        return AlignmentInfo(fallback="disabled")
    if not len(set_a) or not len(set_b):
        return AlignmentInfo(fallback="empty prediction set")
    return align_images(render_instances(set_a), render_instances(set_b), cfg)


def pair_instances(set_a: InstanceSet, set_b: InstanceSet, cfg: FusionConfig = FusionConfig()) -> list[tuple[int, int]]:
    """Greedy one-to-one pairing by descending IoU among same-class instances.

    Ties are broken by ascending (a, b) index. Pairs below ``pair_iou_min``
    are never formed.
    """
    if set_a.shape != set_b.shape:
        raise ShapeMismatch(f"{set_a.shape} vs {set_b.shape}")
    cands = []
    for ia, a in enumerate(set_a):
        for ib, b in enumerate(set_b):
            if a.class_id != b.class_id:
                continue
            iou = mask_iou(a.mask, b.mask)
            if iou >= cfg.pair_iou_min and iou > 0:
                cands.append((-iou, ia, ib))
    cands.sort()
    used_a, used_b, pairs = set(), set(), []
    for _, ia, ib in cands:
        if ia in used_a or ib in used_b:
            continue
        used_a.add(ia)
        used_b.add(ib)
        pairs.append((ia, ib))
    return pairs


def aligned_intersection(mask_a, mask_b, t: PlanarTransform, symmetric: bool = False) -> np.ndarray:
    """Intersection before closing: A warped into B's frame, AND B.

    ``symmetric`` instead intersects A warped forward with B warped back,
    mixing the two frames as in the literal two-warp formulation.
    """
    warped_a = warp_mask(mask_a, t, np.shape(mask_b))
    if symmetric:
        return warped_a & warp_mask(mask_b, t.inverse(), np.shape(mask_b))
    return warped_a & np.asarray(mask_b, dtype=bool)


def fuse_pair(mask_a, mask_b, t: PlanarTransform, cfg: FusionConfig = FusionConfig()) -> np.ndarray:
    return close(aligned_intersection(mask_a, mask_b, t, cfg.symmetric_paper_mode), cfg.struct_elem)


def grid_cell_fractions(mask: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Fraction of the mask's set pixels falling into each grid cell, shape (rows, cols)."""
    h, w = mask.shape
    ry = np.arange(h) * rows // h
    cx = np.arange(w) * cols // w
    total = mask.sum()
    out = np.zeros((rows, cols))
    if total == 0:
        return out
    ys, xs = np.nonzero(mask)
    np.add.at(out, (ry[ys], cx[xs]), 1.0)
    return out / total


def apply_grid_rules(iset: InstanceSet, cfg: FusionConfig = FusionConfig()) -> InstanceSet:
    """Relabel rule-eligible instances as road when enough of them lies in the bottom grid row."""
    rule = set(cfg.grid_rule_classes)
    out = []
    for inst in iset:
        if inst.class_id in rule and inst.class_id is not ClassId.ROAD:
            frac = grid_cell_fractions(inst.mask, cfg.grid_rows, cfg.grid_cols)[-1].sum()
            if frac >= cfg.grid_row_fraction:
                inst = inst.with_class(ClassId.ROAD)
        out.append(inst)
    return iset.with_instances(out)


def fuse_sets(set_a: InstanceSet, set_b: InstanceSet, image: RasterImage | None = None,
              cfg: FusionConfig = FusionConfig()) -> FusionResult:
    """Align, pair, intersect and close two prediction sets, then apply grid rules.

    Output instances follow B's order; with ``keep_unmatched`` the unpaired
    B instances keep their slot and unpaired (warped) A instances are
    appended. Empty fused masks are dropped.
    """
    if set_a.shape != set_b.shape:
        raise ShapeMismatch(f"{set_a.image_id}: {set_a.shape} vs {set_b.shape}")
    if image is not None and image.shape != set_b.shape:
        raise ShapeMismatch(f"image {image.shape} vs predictions {set_b.shape}")
    info = estimate_alignment(set_a, set_b, cfg)
    t = info.transform

    warped = []
    for inst in set_a:
        m = warp_mask(inst.mask, t, set_b.shape)
        warped.append(Instance(inst.class_id, m, inst.score) if m.any() else None)
    keep_idx = [i for i, w in enumerate(warped) if w is not None]
    warped_set = set_b.with_instances([warped[i] for i in keep_idx])
    pairs = [(keep_idx[ia], ib) for ia, ib in pair_instances(warped_set, set_b, cfg)]

    by_b = {ib: ia for ia, ib in pairs}
    out = []
    for ib, b in enumerate(set_b):
        if ib in by_b:
            a = set_a.instances[by_b[ib]]
            m = fuse_pair(a.mask, b.mask, t, cfg)
            if m.any():
                out.append(Instance(b.class_id, m, min(a.score, b.score)))
        elif cfg.keep_unmatched:
            out.append(b)
    if cfg.keep_unmatched:
        paired_a = {ia for ia, _ in pairs}
        out.extend(warped[i] for i in keep_idx if i not in paired_a)

    fused = apply_grid_rules(set_b.with_instances(out), cfg)
    return FusionResult(fused, info, pairs)
