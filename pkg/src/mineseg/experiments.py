"""Reproducible experiments on synthetic data: transform recovery and fusion ablations."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import Paths, PipelineConfig
from .dataset import philox
from .fusion.fuse import FusionConfig, align_images
from .fusion.geometry import PlanarTransform, TransformKind, corner_reprojection_error
from .mock import drop_classes, mock_segment, shift_instances
from .pipeline import run_pipeline
from .raster import ClassId, ensure_dir, load_instance_dir, save_instances
from .synthetic import random_similarity, textured_image, warp_image

RECOVERY_PX = 2.0


@dataclass
class AlignmentTrial:
    index: int
    truth: PlanarTransform
    estimate: PlanarTransform
    fallback: str | None
    error_px: float

    @property
    def recovered(self) -> bool:
        return self.fallback is None and self.error_px < RECOVERY_PX

    def to_dict(self) -> dict:
        return {"index": self.index, "truth": self.truth.to_dict(), "estimate": self.estimate.to_dict(),
                "fallback": self.fallback, "error_px": self.error_px, "recovered": self.recovered}


def alignment_trials(n: int = 50, size: int = 256, seed: int = 0,
                     cfg: FusionConfig = FusionConfig()) -> list[AlignmentTrial]:
    """Warp textured images by random similarities and try to recover each transform."""
    trials = []
    for k in range(n):
        img = textured_image(seed * 100_003 + k, size)
        truth = random_similarity(philox(seed, 0xA119, k), size)
        info = align_images(img, warp_image(img, truth), cfg)
        est = info.transform
        assert info.fallback is not None or est.kind is TransformKind.SIMILARITY
        err = corner_reprojection_error(est, truth, size, size)
        trials.append(AlignmentTrial(k, truth, est, info.fallback, err))
    return trials


def _write_preds(sets: dict, out: Path) -> str:
    ensure_dir(out)
    for image_id, s in sets.items():
        save_instances(s, out / f"{image_id}.json")
    return str(out)


def _ablation(corpus: Path, out: Path, preds_a: dict, preds_b: dict, fusion: FusionConfig, seed: int) -> dict:
    cfg = PipelineConfig(
        fusion=fusion, seed=seed,
        paths=Paths(input=str(corpus / "images"), gt=str(corpus / "gt"), output=str(out / "run"),
                    pred_a=_write_preds(preds_a, out / "pred_a"),
                    pred_b=_write_preds(preds_b, out / "pred_b")),
    )
    manifest = run_pipeline(cfg)
    result = json.loads((out / "run" / "ablation.json").read_text())
    result["alignment_fallbacks"] = manifest["alignment_fallbacks"]
    return result


def complementary_errors(corpus, out, missing_a=ClassId.PEOPLE, missing_b=ClassId.EQUIPMENT,
                         epsilon: float = 0.2, seed: int = 0) -> dict:
    """A never sees ``missing_a``, B never sees ``missing_b``; fused with keep_unmatched."""
    corpus, out = Path(corpus), Path(out)
    gts = load_instance_dir(corpus / "gt")
    a = {k: drop_classes(mock_segment(g, epsilon, seed + 1), [missing_a]) for k, g in gts.items()}
    b = {k: drop_classes(mock_segment(g, epsilon, seed + 2), [missing_b]) for k, g in gts.items()}
    return _ablation(corpus, out, a, b, FusionConfig(keep_unmatched=True), seed)


def shifted_duplicates(corpus, out, epsilon: float = 0.2, shift=(3, 2), seed: int = 0) -> dict:
    """Two independent noisy predictions, A additionally offset by a known shift."""
    corpus, out = Path(corpus), Path(out)
    gts = load_instance_dir(corpus / "gt")
    a = {k: shift_instances(mock_segment(g, epsilon, seed + 1), *shift) for k, g in gts.items()}
    b = {k: mock_segment(g, epsilon, seed + 2) for k, g in gts.items()}
    return _ablation(corpus, out, a, b, FusionConfig(), seed)


def summarize_trials(trials: list[AlignmentTrial]) -> dict:
    errs = np.array([t.error_px for t in trials])
    return {
        "n": len(trials),
        "recovered": sum(t.recovered for t in trials),
        "fallbacks": [t.index for t in trials if t.fallback],
        "median_error_px": float(np.median(errs)) if len(errs) else None,
        "max_error_px": float(errs.max()) if len(errs) else None,
    }
