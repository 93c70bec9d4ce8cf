"""Segmentation and detection losses with analytic gradients.

Every loss returns ``(value, grads)`` where ``grads`` has the same shape as
the differentiated input (or is a dict of such arrays for multi-input
losses). Nothing here trains a network; the gradients exist so the losses
can be dropped into an external training loop and checked numerically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .raster import RasterImage


class DiceDenominator(str, enum.Enum):
    # 1 - sum w*2TP / sum w*(TP+FP+FN); perfect overlap gives -1
    PAPER_EQ4 = "PaperEq4"
    # 1 - sum w*2TP / sum w*(2TP+FP+FN); perfect overlap gives 0
    STANDARD_2TP = "Standard2TP"


@dataclass(frozen=True)
class LossConfig:
    alpha: float = 0.25
    gamma_f: float = 2.0
    class_weights: tuple[float, ...] | None = None
    box_lambda: float = 1.0
    dice_denominator: DiceDenominator = DiceDenominator.STANDARD_2TP
    prob_epsilon: float = 1e-7
    background_class: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dice_denominator", DiceDenominator(self.dice_denominator))
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must be in [0, 1]")
        if self.gamma_f < 0:
            raise ValueError("gamma_f must be >= 0")
        if self.box_lambda < 0:
            raise ValueError("box_lambda must be >= 0")
        if self.class_weights is not None:
            object.__setattr__(self, "class_weights", tuple(float(w) for w in self.class_weights))
            if any(w <= 0 for w in self.class_weights):
                raise ValueError("class weights must be > 0")

    def weights(self, n_classes: int) -> np.ndarray:
        if self.class_weights is None:
            return np.ones(n_classes)
        if len(self.class_weights) != n_classes:
            raise ShapeMismatch(f"{len(self.class_weights)} class weights for {n_classes} classes")
        return np.asarray(self.class_weights)


@dataclass(frozen=True)
class SoftMaskPrediction:
    """Per-class probability maps and binary targets, both shaped (C, H, W).

    A 2-D input is treated as a single class.
    """

    probs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        t = np.asarray(self.targets, dtype=np.float64)
        if p.ndim == 2:
            p = p[None]
        if t.ndim == 2:
            t = t[None]
        if p.shape != t.shape or p.ndim != 3:
            raise ShapeMismatch(f"probs {p.shape} vs targets {t.shape}")
        if np.any((p < 0) | (p > 1)):
            raise ValueError("probabilities must be in [0, 1]")
        if not np.all((t == 0) | (t == 1)):
            raise ValueError("targets must be binary")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "targets", t)


@dataclass(frozen=True)
class DetectionPrediction:
    """ROI classification logits and box regressions.

    ``logits`` is (N, K); ``class_targets`` holds integer labels in [0, K).
    ROIs labelled ``background_class`` contribute no box loss.
    """

    logits: np.ndarray
    class_targets: np.ndarray
    box_params: np.ndarray
    box_targets: np.ndarray
    n_class: int | None = None
    n_box: int | None = None

    def __post_init__(self):
        z = np.atleast_2d(np.asarray(self.logits, dtype=np.float64))
        y = np.atleast_1d(np.asarray(self.class_targets)).astype(int)
        t = np.atleast_2d(np.asarray(self.box_params, dtype=np.float64))
        ts = np.atleast_2d(np.asarray(self.box_targets, dtype=np.float64))
        n = z.shape[0]
        if y.shape != (n,) or t.shape != ts.shape or t.shape[0] != n:
            raise ShapeMismatch("inconsistent ROI counts")
        if np.any((y < 0) | (y >= z.shape[1])):
            raise ValueError("class target out of range")
        for name, arr in (("logits", z), ("class_targets", y), ("box_params", t), ("box_targets", ts)):
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "n_class", n if self.n_class is None else int(self.n_class))
        object.__setattr__(self, "n_box", n if self.n_box is None else int(self.n_box))
        if self.n_class < 1 or self.n_box < 1:
            raise ValueError("n_class and n_box must be >= 1")

    @classmethod
    def from_probs(cls, probs, class_targets, box_params, box_targets, **kw) -> "DetectionPrediction":
        return cls(np.log(np.asarray(probs, dtype=np.float64)), class_targets, box_params, box_targets, **kw)

    @property
    def probs(self) -> np.ndarray:
        return softmax(self.logits)


def softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def smooth_l1(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ax = np.abs(x)
    small = ax < 1.0
    return np.where(small, 0.5 * x * x, ax - 0.5), np.where(small, x, np.sign(x))


def fast_rcnn_loss(pred: DetectionPrediction, cfg: LossConfig = LossConfig()):
    """Softmax cross-entropy over ROIs plus foreground-gated smooth-L1 box loss.

    Gradients are taken with respect to the logits and the box parameters.
    """
    eps = cfg.prob_epsilon
    n, k = pred.logits.shape
    p = softmax(pred.logits)
    rows = np.arange(n)
    p_true = p[rows, pred.class_targets]
    p_clamped = np.clip(p_true, eps, 1 - eps)
    cls_loss = -np.log(p_clamped).sum() / pred.n_class

    onehot = np.zeros_like(p)
    onehot[rows, pred.class_targets] = 1.0
    live = ((p_true > eps) & (p_true < 1 - eps)).astype(float)
    g_logits = live[:, None] * (p - onehot) / pred.n_class

    fg = (pred.class_targets != cfg.background_class).astype(float)
    val, dval = smooth_l1(pred.box_params - pred.box_targets)
    box_loss = cfg.box_lambda * (fg[:, None] * val).sum() / pred.n_box
    g_box = cfg.box_lambda * fg[:, None] * dval / pred.n_box

    return float(cls_loss + box_loss), {"logits": g_logits, "box_params": g_box}


def soft_counts(pred: SoftMaskPrediction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-class soft TP, FP, FN. On binary probabilities these are the integer confusion counts."""
    p, y = pred.probs, pred.targets
    axes = (1, 2)
    tp = (p * y).sum(axis=axes)
    fp = (p * (1 - y)).sum(axis=axes)
    fn = ((1 - p) * y).sum(axis=axes)
    return tp, fp, fn


def weighted_dice_loss(pred: SoftMaskPrediction, cfg: LossConfig = LossConfig()):
    """Class-weighted Dice loss on soft counts; no clamping of probabilities.

    An all-empty target and prediction has a zero denominator; the loss is
    then defined as 0 with zero gradient.
    """
    p, y = pred.probs, pred.targets
    w = cfg.weights(p.shape[0])
    tp, fp, fn = soft_counts(pred)
    num = float((w * 2 * tp).sum())
    if cfg.dice_denominator is DiceDenominator.PAPER_EQ4:
        den_c = tp + fp + fn
        d_den = w[:, None, None] * (1 - y)
    else:
        den_c = 2 * tp + fp + fn
        d_den = np.broadcast_to(w[:, None, None], p.shape)
    den = float((w * den_c).sum())
    if den == 0.0:
        return 0.0, np.zeros_like(p)
    d_num = 2 * w[:, None, None] * y
    grad = -(d_num * den - num * d_den) / den**2
    return 1.0 - num / den, grad


def focal_loss(pred: SoftMaskPrediction, cfg: LossConfig = LossConfig()):
    """Target-conditioned binary focal loss averaged over every pixel of every class.

    y=1 pixels contribute ``-a (1-p)^g log p``, y=0 pixels ``-(1-a) p^g log(1-p)``.
    """
    eps, a, g = cfg.prob_epsilon, cfg.alpha, cfg.gamma_f
    p = np.clip(pred.probs, eps, 1 - eps)
    y = pred.targets
    q = 1 - p
    log_p, log_q = np.log(p), np.log(q)
    pos = -a * q**g * log_p
    neg = -(1 - a) * p**g * log_q
    loss = np.where(y == 1, pos, neg)

    if g == 0:
        d_pos = -a / p
        d_neg = (1 - a) / q
    else:
        d_pos = a * (g * q ** (g - 1) * log_p - q**g / p)
        d_neg = -(1 - a) * (g * p ** (g - 1) * log_q - p**g / q)
    live = (pred.probs > eps) & (pred.probs < 1 - eps)
    grad = np.where(y == 1, d_pos, d_neg) * live / p.size
    return float(loss.mean()), grad


def binary_cross_entropy(pred: SoftMaskPrediction, eps: float = 1e-7) -> float:
    p = np.clip(pred.probs, eps, 1 - eps)
    y = pred.targets
    return float(-(y * np.log(p) + (1 - y) * np.log(1 - p)).mean())


def enhanced_mask_loss(pred: SoftMaskPrediction, cfg: LossConfig = LossConfig()):
    dice, g_dice = weighted_dice_loss(pred, cfg)
    focal, g_focal = focal_loss(pred, cfg)
    return dice + focal, g_dice + g_focal


def total_loss(det: DetectionPrediction, mask: SoftMaskPrediction, cfg: LossConfig = LossConfig()):
    det_val, det_grads = fast_rcnn_loss(det, cfg)
    mask_val, mask_grad = enhanced_mask_loss(mask, cfg)
    return det_val + mask_val, {**det_grads, "probs": mask_grad}


def mse_loss(a: RasterImage | np.ndarray, b: RasterImage | np.ndarray) -> float:
    x = a.data if isinstance(a, RasterImage) else np.asarray(a, dtype=np.float64)
    y = b.data if isinstance(b, RasterImage) else np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ShapeMismatch(f"{x.shape} vs {y.shape}")
    return float(np.mean((x - y) ** 2))
