"""Mock segmenter: a seeded ground-truth perturber standing in for the
external neural models.

For perturbation level ``epsilon`` each ground-truth instance is, in order:

1. dropped with probability ``epsilon / 4``;
2. dilated or eroded (sign chosen by a fair coin) by a square element of
   radius ``round(epsilon * MAX_BOUNDARY_PX * u)``, u ~ U(0, 1);
3. translated by ``round(epsilon * MAX_SHIFT_PX * v)`` pixels per axis,
   v ~ U(-1, 1), with pixels leaving the frame lost;
4. scored ``1 - epsilon * w``, w ~ U(0, 1).

Every instance consumes the same six draws whether or not it is dropped,
so outputs for one instance never depend on the fate of earlier ones.
Instances whose mask becomes empty are dropped.
"""

from __future__ import annotations

import numpy as np

from .dataset import name_key, philox
from .fusion.geometry import PlanarTransform, warp_mask
from .fusion.morphology import dilate, erode
from .raster import ClassId, Instance, InstanceSet

MAX_BOUNDARY_PX = 5
MAX_SHIFT_PX = 10


def mock_segment(gt: InstanceSet, epsilon: float, seed: int) -> InstanceSet:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must be in [0, 1]")
    rng = philox(seed, name_key(gt.image_id))
    out = []
    for inst in gt:
        drop_u, sign_u, depth_u, dx_u, dy_u, score_u = rng.uniform(size=6)
        if drop_u < epsilon / 4:
            continue
        mask = inst.mask
        depth = int(round(epsilon * MAX_BOUNDARY_PX * depth_u))
        if depth:
            mask = (dilate if sign_u < 0.5 else erode)(mask, 2 * depth + 1)
        dx = int(round(epsilon * MAX_SHIFT_PX * (2 * dx_u - 1)))
        dy = int(round(epsilon * MAX_SHIFT_PX * (2 * dy_u - 1)))
        if dx or dy:
            mask = warp_mask(mask, PlanarTransform.translation(dx, dy))
        if not mask.any():
            continue
        out.append(Instance(inst.class_id, mask, 1.0 - epsilon * score_u))
    return gt.with_instances(out)


def drop_classes(iset: InstanceSet, classes) -> InstanceSet:
    gone = {ClassId(c) for c in classes}
    return iset.with_instances(i for i in iset if i.class_id not in gone)


def shift_instances(iset: InstanceSet, dx: float, dy: float) -> InstanceSet:
    """Translate every mask by (dx, dy); instances pushed fully out of frame vanish."""
    t = PlanarTransform.translation(dx, dy)
    out = []
    for inst in iset:
        m = warp_mask(inst.mask, t)
        if m.any():
            out.append(Instance(inst.class_id, m, inst.score))
    return iset.with_instances(out)
