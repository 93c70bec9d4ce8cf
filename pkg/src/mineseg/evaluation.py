"""Instance matching, F1 and class-level mIoU over prediction/ground-truth corpora.

Matching is detection-style: within each class, predictions are visited in
descending score order (ties by ascending index) and each takes the
unassigned ground-truth instance of the same class with the highest IoU,
provided it reaches the threshold. IoU for mIoU is computed per class on
the union of all instance masks of that class, with pixel counts summed
over the corpus. Any 0/0 ratio is reported as 0.
"""

from __future__ import annotations

import csv
import io
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ShapeMismatch
from .raster import (
    STRUCTURAL_CLASSES,
    ClassId,
    InstanceSet,
    as_mask,
    load_instance_dir,
    mask_iou,
)

log = logging.getLogger(__name__)


def instance_iou(a, b) -> float:
    a, b = as_mask(a), as_mask(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    return mask_iou(a, b)


def ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def f1_score(tp: int, fp: int, fn: int) -> float:
    p, r = ratio(tp, tp + fp), ratio(tp, tp + fn)
    return ratio(2 * p * r, p + r)


@dataclass
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __iadd__(self, other: "Counts") -> "Counts":
        self.tp += other.tp
        self.fp += other.fp
        self.fn += other.fn
        return self

    @property
    def precision(self) -> float:
        return ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        return f1_score(self.tp, self.fp, self.fn)


@dataclass
class MatchResult:
    pairs: list[tuple[int, int, float]] = field(default_factory=list)
    per_class: dict[ClassId, Counts] = field(default_factory=dict)

    @property
    def tp(self) -> int:
        return sum(c.tp for c in self.per_class.values())

    @property
    def fp(self) -> int:
        return sum(c.fp for c in self.per_class.values())

    @property
    def fn(self) -> int:
        return sum(c.fn for c in self.per_class.values())


def match_instances(pred: InstanceSet, gt: InstanceSet, iou_threshold: float = 0.5) -> MatchResult:
    if pred.shape != gt.shape:
        raise ShapeMismatch(f"{pred.image_id}: {pred.shape} vs {gt.shape}")
    result = MatchResult()
    classes = sorted({i.class_id for i in pred} | {i.class_id for i in gt}, key=lambda c: c.value)
    for cls in classes:
        p_idx = [k for k, i in enumerate(pred) if i.class_id == cls]
        g_idx = [k for k, i in enumerate(gt) if i.class_id == cls]
        p_idx.sort(key=lambda k: (-pred.instances[k].score, k))
        free = list(g_idx)
        counts = Counts()
        for pk in p_idx:
            best, best_iou = None, -1.0
            for gk in free:
                iou = instance_iou(pred.instances[pk].mask, gt.instances[gk].mask)
                if iou > best_iou:
                    best, best_iou = gk, iou
            if best is not None and best_iou >= iou_threshold:
                free.remove(best)
                result.pairs.append((pk, best, best_iou))
                counts.tp += 1
            else:
                counts.fp += 1
        counts.fn = len(free)
        result.per_class[cls] = counts
    return result


def class_areas(pred: InstanceSet, gt: InstanceSet, cls) -> tuple[int, int, int, int]:
    """(|A∩B|, |A∪B|, |A|, |B|) for the class-level union masks A (pred) and B (gt)."""
    a, b = pred.class_union(cls), gt.class_union(cls)
    return (int(np.count_nonzero(a & b)), int(np.count_nonzero(a | b)),
            int(np.count_nonzero(a)), int(np.count_nonzero(b)))


def mean_iou(pred: InstanceSet, gt: InstanceSet, classes=None) -> float:
    if pred.shape != gt.shape:
        raise ShapeMismatch(f"{pred.image_id}: {pred.shape} vs {gt.shape}")
    present = {i.class_id for i in gt}
    classes = [c for c in (classes or list(ClassId)) if ClassId(c) in present]
    if not classes:
        return 0.0
    ious = []
    for c in classes:
        inter, union, _, _ = class_areas(pred, gt, c)
        ious.append(ratio(inter, union))
    return float(np.mean(ious))


def merge_surrounding(iset: InstanceSet) -> InstanceSet:
    return iset.with_instances(
        inst.with_class(ClassId.SURROUNDING) if inst.class_id in STRUCTURAL_CLASSES else inst
        for inst in iset
    )


@dataclass(frozen=True)
class EvalConfig:
    iou_threshold: float = 0.5
    merge_surrounding: bool = False

    def __post_init__(self):
        if not 0 < self.iou_threshold <= 1:
            raise ValueError("iou_threshold must be in (0, 1]")


@dataclass
class ClassTotals:
    counts: Counts = field(default_factory=Counts)
    inter: int = 0
    union: int = 0
    pred_area: int = 0
    gt_area: int = 0
    in_gt: bool = False

    def row(self) -> dict:
        c = self.counts
        return {
            "tp": c.tp, "fp": c.fp, "fn": c.fn,
            "precision": c.precision, "recall": c.recall, "f1": c.f1,
            "iou": ratio(self.inter, self.union),
            "pixel_f1": ratio(2 * self.inter, self.pred_area + self.gt_area),
            "in_gt": self.in_gt,
        }


@dataclass
class EvalReport:
    per_class: dict[str, dict]
    aggregate: dict
    per_image: list[dict]
    missing: dict
    config: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "aggregate": self.aggregate,
            "per_class": self.per_class,
            "per_image": self.per_image,
            "missing": self.missing,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["class", "tp", "fp", "fn", "precision", "recall", "f1", "iou", "pixel_f1", "in_gt"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for name, row in self.per_class.items():
            w.writerow({"class": name, **row})
        return buf.getvalue()


def evaluate_sets(preds: dict[str, InstanceSet], gts: dict[str, InstanceSet],
                  cfg: EvalConfig = EvalConfig()) -> EvalReport:
    """Evaluate image-id keyed predictions against ground truth.

    Images present on only one side are listed under ``missing`` and
    skipped. Per-image results are folded in sorted image_id order.
    """
    ids = sorted(set(preds) & set(gts))
    missing = {
        "pred": sorted(set(gts) - set(preds)),
        "gt": sorted(set(preds) - set(gts)),
    }
    for side, names in missing.items():
        for name in names:
            log.warning("no %s file for image %s; skipped", side, name)

    totals: dict[ClassId, ClassTotals] = defaultdict(ClassTotals)
    per_image = []
    for image_id in ids:
        pred, gt = preds[image_id], gts[image_id]
        if cfg.merge_surrounding:
            pred, gt = merge_surrounding(pred), merge_surrounding(gt)
        m = match_instances(pred, gt, cfg.iou_threshold)
        gt_classes = {i.class_id for i in gt}
        for cls, c in m.per_class.items():
            totals[cls].counts += c
        for cls in set(m.per_class) | gt_classes:
            inter, union, pa, ga = class_areas(pred, gt, cls)
            t = totals[cls]
            t.inter += inter
            t.union += union
            t.pred_area += pa
            t.gt_area += ga
            t.in_gt |= cls in gt_classes
        per_image.append({
            "image_id": image_id, "tp": m.tp, "fp": m.fp, "fn": m.fn,
            "f1": f1_score(m.tp, m.fp, m.fn),
            "miou": mean_iou(pred, gt),
        })

    order = [c for c in ClassId if c in totals]
    per_class = {c.value: totals[c].row() for c in order}
    total = Counts()
    for c in order:
        total += totals[c].counts
    gt_ious = [per_class[c.value]["iou"] for c in order if totals[c].in_gt]
    aggregate = {
        "tp": total.tp, "fp": total.fp, "fn": total.fn,
        "precision": total.precision, "recall": total.recall, "f1": total.f1,
        "miou": float(np.mean(gt_ious)) if gt_ious else 0.0,
        "n_images": len(ids),
    }
    config = {"iou_threshold": cfg.iou_threshold, "merge_surrounding": cfg.merge_surrounding}
    return EvalReport(per_class, aggregate, per_image, missing, config)


def evaluate(pred_dir, gt_dir, cfg: EvalConfig = EvalConfig()) -> EvalReport:
    preds = load_instance_dir(pred_dir) if Path(pred_dir).exists() else {}
    return evaluate_sets(preds, load_instance_dir(gt_dir), cfg)
