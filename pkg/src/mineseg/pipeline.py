"""Batch pipeline: filter, (degrade,) enhance, predictions, fusion, evaluation.

Outputs under ``paths.output``:

    enhanced/<name>.png      enhanced input images
    fused/<image_id>.json    fused instance sets
    overlays/<image_id>.png  fused masks drawn on the enhanced image
    report.json, report.csv  evaluation of fused sets (when ground truth is given)
    ablation.json            evaluation of each input set and of unaligned fusion
    filter_report.json       filter verdicts (when filtering is on)
    manifest.json            per-image outcomes and run metadata

Everything except the manifest timestamps is a deterministic function of
the configuration and inputs.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import PipelineConfig, config_hash, config_to_dict
from .dataset import HashSet, degrade, filter_image, name_key
from .enhance import enhance
from .errors import MineSegError
from .evaluation import evaluate_sets
from .fusion.fuse import fuse_sets
from .mock import mock_segment
from .raster import (
    InstanceSet,
    ensure_dir,
    list_images,
    load_instance_dir,
    read_image,
    save_instances,
    write_image,
)
from .render import render_overlay

log = logging.getLogger(__name__)

MOCK_STREAM_A = 0xA
MOCK_STREAM_B = 0xB


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def mock_seed(seed: int, stream: int) -> int:
    return (int(seed) * 1_000_003 + stream) % 2**63


@dataclass
class ImageJob:
    path: Path
    gt: InstanceSet | None
    pred_a: InstanceSet | None
    pred_b: InstanceSet | None


def _process(job: ImageJob, cfg: PipelineConfig, out: Path) -> dict:
    image_id = job.path.stem
    record = {"image": job.path.name, "image_id": image_id}
    try:
        img = read_image(job.path)
        if cfg.degrade_inputs:
            img = degrade(img, cfg.degrade, stream=name_key(job.path.name))
        enh = enhance(img, cfg.enhance)
        write_image(enh, out / "enhanced" / f"{image_id}.png")
        record["enhanced"] = f"enhanced/{image_id}.png"

        pred_a, pred_b = job.pred_a, job.pred_b
        if pred_a is None and job.gt is not None:
            pred_a = mock_segment(job.gt, cfg.mock_epsilon, mock_seed(cfg.seed, MOCK_STREAM_A))
            record["pred_a"] = "mock"
        if pred_b is None and job.gt is not None:
            pred_b = mock_segment(job.gt, cfg.mock_epsilon, mock_seed(cfg.seed, MOCK_STREAM_B))
            record["pred_b"] = "mock"
        if pred_a is None or pred_b is None:
            raise MineSegError("no predictions and no ground truth to mock from")

        result = fuse_sets(pred_a, pred_b, enh, cfg.fusion)
        save_instances(result.fused, out / "fused" / f"{image_id}.json")
        write_image(render_overlay(enh, result.fused), out / "overlays" / f"{image_id}.png")
        record.update(
            status="processed",
            fused=f"fused/{image_id}.json",
            alignment=result.alignment.to_dict(),
            n_pairs=len(result.pairs),
            n_fused=len(result.fused),
        )
        if cfg.ablation:
            unaligned = fuse_sets(pred_a, pred_b, enh, replace(cfg.fusion, align=False)).fused
            record["_sets"] = (pred_a, pred_b, result.fused, unaligned)
        else:
            record["_sets"] = (None, None, result.fused, None)
    except (MineSegError, OSError, ValueError) as exc:
        log.warning("%s: %s", job.path.name, exc)
        record.update(status="skipped", reason=f"{type(exc).__name__}: {exc}")
    return record


def _process_star(args):
    return _process(*args)


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every stage and return the manifest (also written to disk).

    Per-image failures are recorded in the manifest and never abort the batch.
    """
    cfg = cfg.seeded()
    paths = cfg.paths
    if not paths.input or not paths.output:
        raise MineSegError("paths.input and paths.output are required")
    images = list_images(paths.input)
    if not images:
        raise MineSegError(f"no PNG images in {paths.input}")
    out = ensure_dir(paths.output)
    for sub in ("enhanced", "fused", "overlays"):
        ensure_dir(out / sub)
    started = datetime.now(timezone.utc).isoformat()

    gts = load_instance_dir(paths.gt) if paths.gt else {}
    preds_a = load_instance_dir(paths.pred_a) if paths.pred_a else {}
    preds_b = load_instance_dir(paths.pred_b) if paths.pred_b else {}

    records: dict[str, dict] = {}
    todo = []
    if cfg.run_filter:
        seen = HashSet()
        verdicts = {}
        for p in images:
            try:
                v = filter_image(read_image(p), cfg.filter, seen)
            except MineSegError as exc:
                records[p.name] = {"image": p.name, "image_id": p.stem, "status": "skipped",
                                   "reason": f"{type(exc).__name__}: {exc}"}
                continue
            verdicts[p.name] = v.to_dict()
            if v.keep:
                todo.append(p)
            else:
                records[p.name] = {"image": p.name, "image_id": p.stem, "status": "skipped",
                                   "reason": "filtered: " + ",".join(r.value for r in v.reasons)}
        dump_json(verdicts, out / "filter_report.json")
    else:
        todo = list(images)

    jobs = [ImageJob(p, gts.get(p.stem), preds_a.get(p.stem), preds_b.get(p.stem)) for p in todo]
    args = [(job, cfg, out) for job in jobs]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_process_star, args))
    else:
        results = [_process_star(a) for a in args]
    for rec in results:
        records[rec["image"]] = rec

    ordered = [records[p.name] for p in images]
    sets = {r["image_id"]: r.pop("_sets") for r in ordered if "_sets" in r}

    if gts:
        fused = {k: v[2] for k, v in sets.items()}
        report = evaluate_sets(fused, gts, cfg.eval)
        dump_json(report.to_dict(), out / "report.json")
        (out / "report.csv").write_text(report.to_csv())
        if cfg.ablation:
            ablation = {}
            for name, idx in (("pred_a", 0), ("pred_b", 1), ("fused", 2), ("unaligned", 3)):
                part = {k: v[idx] for k, v in sets.items()}
                ablation[name] = evaluate_sets(part, gts, cfg.eval).aggregate
            dump_json(ablation, out / "ablation.json")

    processed = sum(r["status"] == "processed" for r in ordered)
    manifest = {
        "tool_version": __version__,
        "config_hash": config_hash(cfg),
        "config": config_to_dict(cfg),
        "counts": {"input": len(images), "processed": processed, "skipped": len(images) - processed},
        "alignment_fallbacks": sorted(
            r["image_id"] for r in ordered
            if r.get("alignment", {}).get("fallback") not in (None, "disabled")
        ),
        "images": ordered,
        "started_at": started,
        "finished_at": datetime.now(timezone.utc).isoformat(),
    }
    dump_json(manifest, out / "manifest.json")
    return manifest
