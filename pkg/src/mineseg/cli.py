"""Command-line entry point: ``mineseg <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 loss-check failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from dataclasses import replace
from pathlib import Path

from .config import PipelineConfig, load_config, override
from .dataset import HashSet, degrade, filter_image, name_key
from .enhance import enhance
from .errors import MineSegError
from .evaluation import evaluate
from .fusion.fuse import fuse_sets
from .gradcheck import TOLERANCE, run_gradient_suite
from .mock import drop_classes, mock_segment, shift_instances
from .raster import (
    ensure_dir,
    list_images,
    load_instance_dir,
    load_instances,
    read_image,
    save_instances,
    write_image,
)
from .render import render_overlay

EXIT_USAGE, EXIT_DATA, EXIT_CHECK = 1, 2, 3

log = logging.getLogger("mineseg")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _inputs(path) -> list[Path]:
    p = Path(path)
    if p.is_dir():
        return list_images(p)
    if p.exists():
        return [p]
    raise MineSegError(f"{p}: no such file or directory")


def _out_path(src: Path, output, many: bool) -> Path:
    out = Path(output)
    if many or out.is_dir() or not out.suffix:
        return ensure_dir(out) / src.name
    ensure_dir(out.parent)
    return out


def cmd_enhance(args, cfg: PipelineConfig) -> int:
    if args.gamma is not None and args.target_mean is not None:
        raise UsageError("--gamma and --target-mean are mutually exclusive")
    cfg = override(cfg, "enhance", gamma=args.gamma, target_mean=args.target_mean,
                   smoothing_radius=args.radius, denoise_reflectance=args.denoise or None)
    files = _inputs(args.input)
    for f in files:
        write_image(enhance(read_image(f), cfg.enhance), _out_path(f, args.output, len(files) > 1))
    log.info("enhanced %d image(s)", len(files))
    return 0


def cmd_degrade(args, cfg: PipelineConfig) -> int:
    cfg = override(cfg, "degrade", seed=cfg.seed, noise_sigma=args.sigma,
                   brightness_factor=args.brightness, contrast_factor=args.contrast)
    files = _inputs(args.input)
    for f in files:
        # each file gets its own noise stream under the shared seed
        img = degrade(read_image(f), cfg.degrade, stream=name_key(f.name))
        write_image(img, _out_path(f, args.output, len(files) > 1))
    return 0


def cmd_filter(args, cfg: PipelineConfig) -> int:
    cfg = override(cfg, "filter", dark_threshold=args.dark, blur_threshold=args.blur,
                   dup_hash_distance=args.dup_distance)
    seen = HashSet()
    report = {}
    for f in _inputs(args.input):
        verdict = filter_image(read_image(f), cfg.filter, seen)
        report[f.name] = verdict.to_dict()
        if not verdict.keep and args.move_rejected:
            shutil.move(str(f), ensure_dir(args.move_rejected) / f.name)
    Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    kept = sum(v["keep"] for v in report.values())
    log.info("kept %d of %d", kept, len(report))
    return 0


def cmd_mock(args, cfg: PipelineConfig) -> int:
    out = ensure_dir(args.out)
    for image_id, gt in load_instance_dir(args.gt).items():
        pred = mock_segment(gt, args.epsilon, cfg.seed)
        if args.drop_class:
            pred = drop_classes(pred, args.drop_class)
        if args.shift:
            pred = shift_instances(pred, *args.shift)
        save_instances(pred, out / f"{image_id}.json")
    return 0


def _fusion_cfg(args, cfg: PipelineConfig):
    fcfg = replace(cfg.fusion, seed=cfg.seed)
    if args.no_align:
        fcfg = replace(fcfg, align=False)
    if args.keep_unmatched:
        fcfg = replace(fcfg, keep_unmatched=True)
    if args.symmetric:
        fcfg = replace(fcfg, symmetric_paper_mode=True)
    return fcfg


def cmd_fuse(args, cfg: PipelineConfig) -> int:
    fcfg = _fusion_cfg(args, cfg)
    if Path(args.pred_a).is_dir():
        preds_a, preds_b = load_instance_dir(args.pred_a), load_instance_dir(args.pred_b)
        images = {p.stem: p for p in _inputs(args.image)}
        out = ensure_dir(args.out)
        info = {}
        for image_id in sorted(set(preds_a) & set(preds_b)):
            img = read_image(images[image_id]) if image_id in images else None
            result = fuse_sets(preds_a[image_id], preds_b[image_id], img, fcfg)
            save_instances(result.fused, out / f"{image_id}.json")
            info[image_id] = result.alignment.to_dict()
        unpaired = sorted(set(preds_a) ^ set(preds_b))
        for image_id in unpaired:
            log.warning("%s: prediction present for only one model; skipped", image_id)
    else:
        img = read_image(args.image)
        result = fuse_sets(load_instances(args.pred_a), load_instances(args.pred_b), img, fcfg)
        ensure_dir(Path(args.out).parent)
        save_instances(result.fused, args.out)
        info = {result.fused.image_id: result.alignment.to_dict()}
    if args.alignment_report:
        Path(args.alignment_report).write_text(json.dumps(info, indent=2) + "\n")
    return 0


def cmd_eval(args, cfg: PipelineConfig) -> int:
    cfg = override(cfg, "eval", iou_threshold=args.iou, merge_surrounding=args.merge_surrounding or None)
    report = evaluate(args.pred, args.gt, cfg.eval)
    Path(args.out).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    csv_path = Path(args.csv) if args.csv else Path(args.out).with_suffix(".csv")
    csv_path.write_text(report.to_csv())
    agg = report.aggregate
    print(f"F1 {agg['f1']:.4f}  mIoU {agg['miou']:.4f}  images {agg['n_images']}")
    return 0


def cmd_render(args, cfg: PipelineConfig) -> int:
    write_image(render_overlay(read_image(args.image), load_instances(args.pred)), args.out)
    return 0


def cmd_loss_check(args, cfg: PipelineConfig) -> int:
    results = run_gradient_suite(points=args.points, seed=cfg.seed, cfg=cfg.loss)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<30} max rel err {r.max_relative_error:.3e}"
              f"  ({r.points} points, tol {TOLERANCE:g})")
    return 0 if all(r.passed for r in results) else EXIT_CHECK


def cmd_run(args, cfg: PipelineConfig) -> int:
    from .pipeline import run_pipeline

    cfg = override(cfg, "paths", input=args.input, output=args.output, gt=args.gt,
                   pred_a=args.pred_a, pred_b=args.pred_b)
    cfg = override(cfg, mock_epsilon=args.epsilon, run_filter=args.filter or None,
                   degrade_inputs=args.degrade or None)
    manifest = run_pipeline(cfg)
    c = manifest["counts"]
    print(f"processed {c['processed']} / {c['input']} images, skipped {c['skipped']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="YAML config file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)

    parser = Parser(prog="mineseg", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("enhance", parents=[common], help="Retinex-style low-light enhancement")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--target-mean", type=float)
    p.add_argument("--radius", type=int)
    p.add_argument("--denoise", action="store_true", help="3x3 median filter on reflectance")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("degrade", parents=[common], help="synthesise low-light copies")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--brightness", type=float)
    p.add_argument("--contrast", type=float)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("filter", parents=[common], help="flag dark, blurred and duplicate frames")
    p.add_argument("--input", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--move-rejected")
    p.add_argument("--dark", type=float)
    p.add_argument("--blur", type=float)
    p.add_argument("--dup-distance", type=int)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("mock-segment", parents=[common], help="perturb ground truth into mock predictions")
    p.add_argument("--gt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--shift", type=float, nargs=2, metavar=("DX", "DY"))
    p.add_argument("--drop-class", action="append")
    p.set_defaults(func=cmd_mock)

    p = sub.add_parser("fuse", parents=[common], help="align and fuse two prediction sets")
    p.add_argument("--image", required=True, help="PNG, or directory in batch mode")
    p.add_argument("--pred-a", required=True, help="JSON, or directory in batch mode")
    p.add_argument("--pred-b", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-align", action="store_true", help="ablation: skip alignment")
    p.add_argument("--keep-unmatched", action="store_true")
    p.add_argument("--symmetric", action="store_true", help="literal two-warp intersection")
    p.add_argument("--alignment-report")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", parents=[common], help="F1 / mIoU against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--iou", type=float)
    p.add_argument("--merge-surrounding", action="store_true")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", parents=[common], help="draw mask overlays")
    p.add_argument("--image", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("loss-check", parents=[common], help="finite-difference gradient suite")
    p.add_argument("--points", type=int, default=100)
    p.set_defaults(func=cmd_loss_check)

    p = sub.add_parser("run", parents=[common], help="full pipeline")
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--gt")
    p.add_argument("--pred-a")
    p.add_argument("--pred-b")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--filter", action="store_true")
    p.add_argument("--degrade", action="store_true")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config) if getattr(args, "config", None) else PipelineConfig()
        cfg = override(cfg, seed=getattr(args, "seed", None), workers=getattr(args, "workers", None))
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"mineseg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MineSegError, OSError, ValueError, KeyError) as exc:
        print(f"mineseg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
