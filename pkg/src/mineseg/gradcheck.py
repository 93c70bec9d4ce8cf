"""Central finite-difference checks for every analytic loss gradient."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .losses import (
    DetectionPrediction,
    DiceDenominator,
    LossConfig,
    SoftMaskPrediction,
    enhanced_mask_loss,
    fast_rcnn_loss,
    focal_loss,
    total_loss,
    weighted_dice_loss,
)

STEP = 1e-5
TOLERANCE = 1e-4
PROB_RANGE = (0.05, 0.95)


def central_difference(f: Callable[[np.ndarray], float], x: np.ndarray, h: float = STEP) -> np.ndarray:
    g = np.empty_like(x)
    flat, gflat = x.reshape(-1), g.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        up = f(x)
        flat[i] = orig - h
        down = f(x)
        flat[i] = orig
        gflat[i] = (up - down) / (2 * h)
    return g


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Max-norm error of the gradient vector relative to its max-norm magnitude."""
    scale = max(np.abs(analytic).max(), np.abs(numeric).max(), 1e-12)
    return float(np.abs(analytic - numeric).max() / scale)


def random_mask_prediction(rng: np.random.Generator, n_classes=2, size=(4, 4)) -> SoftMaskPrediction:
    probs = rng.uniform(*PROB_RANGE, size=(n_classes, *size))
    targets = (rng.uniform(size=probs.shape) < 0.4).astype(float)
    return SoftMaskPrediction(probs, targets)


def random_detection(rng: np.random.Generator, n_rois=4, n_classes=3) -> DetectionPrediction:
    logits = rng.normal(0.0, 1.0, size=(n_rois, n_classes))
    labels = rng.integers(0, n_classes, size=n_rois)
    box = rng.normal(0.0, 1.0, size=(n_rois, 4))
    target = rng.normal(0.0, 1.0, size=(n_rois, 4))
    return DetectionPrediction(logits, labels, box, target)


def _mask_check(loss, cfg):
    def run(rng):
        pred = random_mask_prediction(rng)
        _, grad = loss(pred, cfg)
        probs = pred.probs.copy()
        num = central_difference(lambda p: loss(SoftMaskPrediction(p, pred.targets), cfg)[0], probs)
        return relative_error(grad, num)
    return run


def _det_check(cfg):
    def run(rng):
        det = random_detection(rng)
        _, grads = fast_rcnn_loss(det, cfg)
        rebuild = lambda **kw: DetectionPrediction(**{
            "logits": det.logits, "class_targets": det.class_targets,
            "box_params": det.box_params, "box_targets": det.box_targets, **kw})
        num_z = central_difference(lambda z: fast_rcnn_loss(rebuild(logits=z), cfg)[0], det.logits.copy())
        num_t = central_difference(lambda t: fast_rcnn_loss(rebuild(box_params=t), cfg)[0], det.box_params.copy())
        return max(relative_error(grads["logits"], num_z), relative_error(grads["box_params"], num_t))
    return run


def _total_check(cfg):
    def run(rng):
        det = random_detection(rng)
        mask = random_mask_prediction(rng)
        _, grads = total_loss(det, mask, cfg)
        f_z = lambda z: total_loss(DetectionPrediction(z, det.class_targets, det.box_params, det.box_targets), mask, cfg)[0]
        f_t = lambda t: total_loss(DetectionPrediction(det.logits, det.class_targets, t, det.box_targets), mask, cfg)[0]
        f_p = lambda p: total_loss(det, SoftMaskPrediction(p, mask.targets), cfg)[0]
        return max(
            relative_error(grads["logits"], central_difference(f_z, det.logits.copy())),
            relative_error(grads["box_params"], central_difference(f_t, det.box_params.copy())),
            relative_error(grads["probs"], central_difference(f_p, mask.probs.copy())),
        )
    return run


def default_checks(cfg: LossConfig = LossConfig()) -> dict[str, Callable]:
    paper = LossConfig(**{**cfg.__dict__, "dice_denominator": DiceDenominator.PAPER_EQ4})
    standard = LossConfig(**{**cfg.__dict__, "dice_denominator": DiceDenominator.STANDARD_2TP})
    weighted = LossConfig(**{**cfg.__dict__, "class_weights": (2.0, 0.5)})
    return {
        "weighted_dice[PaperEq4]": _mask_check(weighted_dice_loss, paper),
        "weighted_dice[Standard2TP]": _mask_check(weighted_dice_loss, standard),
        "weighted_dice[class_weights]": _mask_check(weighted_dice_loss, weighted),
        "focal": _mask_check(focal_loss, cfg),
        "enhanced_mask": _mask_check(enhanced_mask_loss, cfg),
        "fast_rcnn": _det_check(cfg),
        "total": _total_check(cfg),
    }


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_relative_error: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_relative_error < TOLERANCE


def run_gradient_suite(points: int = 100, seed: int = 0, cfg: LossConfig = LossConfig()) -> list[CheckResult]:
    results = []
    for k, (name, check) in enumerate(default_checks(cfg).items()):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, k])))
        worst = max(check(rng) for _ in range(points))
        results.append(CheckResult(name, worst, points))
    return results
