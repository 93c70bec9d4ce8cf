"""Acceptance criteria. Each test prints one PASS/FAIL line to the terminal.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np
import pytest

from mineseg.enhance import EnhanceConfig, decompose, enhance, recombine
from mineseg.evaluation import evaluate, evaluate_sets, match_instances, mean_iou
from mineseg.experiments import alignment_trials, complementary_errors, shifted_duplicates, summarize_trials
from mineseg.fusion.fuse import FusionConfig, aligned_intersection, apply_grid_rules, fuse_pair
from mineseg.fusion.geometry import PlanarTransform, warp_mask
from mineseg.fusion.morphology import close
from mineseg.gradcheck import run_gradient_suite
from mineseg.losses import (
    DiceDenominator,
    LossConfig,
    SoftMaskPrediction,
    binary_cross_entropy,
    focal_loss,
    soft_counts,
    weighted_dice_loss,
)
from mineseg.pipeline import run_pipeline
from mineseg.raster import ClassId, RasterImage

from conftest import CORPUS
from test_evaluation import three_gt_two_pred, two_class_2x2
from test_fuse import grid_fixture
from test_losses import dice_oracle
from test_pipeline import artifact_bytes, cfg_for


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {detail}")
        return ok
    return emit


def test_01_gradient_suite(verdict):
    t0 = time.perf_counter()
    results = run_gradient_suite(points=100, seed=0)
    dt = time.perf_counter() - t0
    worst = max(r.max_relative_error for r in results)
    ok = all(r.passed for r in results) and dt < 10
    verdict(1, ok, f"7 gradient checks x 100 points, worst rel err {worst:.2e} (< 1e-4), {dt:.1f} s (< 10 s)")
    assert ok, [(r.name, r.max_relative_error) for r in results]


def test_02_loss_oracle(verdict):
    rng = np.random.default_rng(20240502)
    worst = 0.0
    counts_exact = True
    for _ in range(500):
        c, h, w = rng.integers(1, 4), rng.integers(1, 9), rng.integers(1, 9)
        p = (rng.random((c, h, w)) < 0.5).astype(float)
        y = (rng.random((c, h, w)) < 0.5).astype(float)
        weights = tuple(rng.uniform(0.5, 3.0, c))
        pred = SoftMaskPrediction(p, y)
        tp, fp, fn = soft_counts(pred)
        b, t = p.astype(bool), y.astype(bool)
        counts_exact &= (np.array_equal(tp, (b & t).sum(axis=(1, 2)))
                         and np.array_equal(fp, (b & ~t).sum(axis=(1, 2)))
                         and np.array_equal(fn, (~b & t).sum(axis=(1, 2))))
        for mode, short_den in ((DiceDenominator.PAPER_EQ4, True), (DiceDenominator.STANDARD_2TP, False)):
            val = weighted_dice_loss(pred, LossConfig(class_weights=weights, dice_denominator=mode))[0]
            worst = max(worst, abs(val - dice_oracle(p, y, weights, short_den)))
    ok = counts_exact and worst <= 1e-12
    verdict(2, ok, f"500 binary mask pairs: counts exact={counts_exact}, max |loss - oracle| {worst:.1e} (<= 1e-12)")
    assert ok


def test_03_focal_reduction(verdict):
    rng = np.random.default_rng(3)
    cfg = LossConfig(alpha=0.5, gamma_f=0.0)
    p = rng.uniform(0.0, 1.0, 1000)
    y = (rng.random(1000) < 0.5).astype(float)
    worst = 0.0
    for pi, yi in zip(p, y):
        pred = SoftMaskPrediction(np.array([[pi]]), np.array([[yi]]))
        worst = max(worst, abs(focal_loss(pred, cfg)[0] - 0.5 * binary_cross_entropy(pred)))
    ok = worst <= 1e-12
    verdict(3, ok, f"gamma=0, alpha=0.5 over 1000 pixels: max |focal - BCE/2| {worst:.1e} (<= 1e-12)")
    assert ok


def test_04_dice_denominator_modes(verdict):
    y = (np.random.default_rng(4).random((2, 5, 5)) < 0.5).astype(float)
    pred = SoftMaskPrediction(y, y)
    short_den = weighted_dice_loss(pred, LossConfig(dice_denominator=DiceDenominator.PAPER_EQ4))[0]
    standard = weighted_dice_loss(pred, LossConfig(dice_denominator=DiceDenominator.STANDARD_2TP))[0]
    ok = short_den == -1.0 and standard == 0.0
    verdict(4, ok, f"perfect match: PaperEq4 {short_den!r} (== -1), Standard2TP {standard!r} (== 0)")
    assert ok


def test_05_alignment_recovery(verdict):
    t0 = time.perf_counter()
    trials = alignment_trials(n=50, size=256, seed=0)
    dt = time.perf_counter() - t0
    s = summarize_trials(trials)
    fallbacks_identity = all(t.estimate == PlanarTransform.identity() for t in trials if t.fallback)
    ok = s["recovered"] >= 48 and fallbacks_identity and dt < 60
    verdict(5, ok, f"{s['recovered']}/50 transforms recovered < 2 px (>= 48), median {s['median_error_px']:.2f} px, "
                   f"fallbacks {s['fallbacks']}, {dt:.1f} s (< 60 s)")
    assert ok


def test_06_fusion_invariants(verdict):
    rng = np.random.default_rng(6)
    cfg = FusionConfig()
    contained = idempotent = True
    for _ in range(200):
        shape = tuple(rng.integers(8, 40, 2))
        a = rng.random(shape) < rng.uniform(0.1, 0.9)
        b = rng.random(shape) < rng.uniform(0.1, 0.9)
        t = PlanarTransform.similarity(rng.uniform(0.8, 1.25), rng.uniform(-0.3, 0.3),
                                       rng.uniform(-5, 5), rng.uniform(-5, 5))
        raw = aligned_intersection(a, b, t)
        contained &= not (raw & ~warp_mask(a, t)).any() and not (raw & ~b).any()
        fused = fuse_pair(a, b, t, cfg)
        idempotent &= np.array_equal(close(fused, cfg.struct_elem), fused)
    ok = contained and idempotent
    verdict(6, ok, f"200 random pairs: containment={contained}, closing idempotent={idempotent}")
    assert ok


def test_07_grid_rule(verdict):
    s = grid_fixture()
    table = {
        0.3: [ClassId.ROAD, ClassId.PEOPLE, ClassId.ROOF, ClassId.WALL, ClassId.EQUIPMENT, ClassId.ROAD],
        0.2: [ClassId.ROAD, ClassId.PEOPLE, ClassId.ROAD, ClassId.WALL, ClassId.EQUIPMENT, ClassId.ROAD],
    }
    got = {tau: [i.class_id for i in apply_grid_rules(s, FusionConfig(grid_row_fraction=tau))] for tau in table}
    ok = got == table
    verdict(7, ok, "64x64 rule fixtures: bottom-row wall -> road, people unchanged, 25% roof kept at 0.3 / road at 0.2")
    assert ok


def test_08_metrics_oracle(verdict):
    self_eval = evaluate(CORPUS / "gt", CORPUS / "gt").aggregate
    pred, gt = three_gt_two_pred()
    f1 = evaluate_sets({"f": pred}, {"f": gt}).aggregate["f1"]
    m = match_instances(pred, gt)
    pm, gm = two_class_2x2()
    miou = mean_iou(pm, gm)
    ok = (self_eval["f1"] == 1.0 and self_eval["miou"] == 1.0 and (m.tp, m.fp, m.fn) == (1, 1, 2)
          and abs(f1 - 0.4) <= 1e-15 and miou == 0.75)
    verdict(8, ok, f"gt vs gt F1 {self_eval['f1']} mIoU {self_eval['miou']}; 3-GT/2-pred F1 {f1:.15g}; "
                   f"2x2 mIoU {miou}")
    assert ok


def test_09_enhancement_contract(verdict):
    rng = np.random.default_rng(9)
    cfg = EnhanceConfig()
    worst_rec = 0.0
    brightening = True
    for _ in range(20):
        data = rng.random((48, 48, 3)) ** rng.uniform(1, 4)
        img = RasterImage(data)
        pair = decompose(img, cfg)
        rec = recombine(pair.reflectance, pair.illumination).data
        keep = data >= cfg.eps_floor
        worst_rec = max(worst_rec, float(np.abs(rec - data)[keep].max()))
        for g in (1.0, 1.5, 2.2, 4.0):
            brightening &= enhance(img, EnhanceConfig(gamma=g)).data.mean() >= rec.mean()
    a = np.full((128, 128), 0.05)
    a[:, 64:] = 0.9
    out = enhance(RasterImage(a)).data[:, :, 0]
    dark_gain = out[:, :64].mean() - 0.05
    bright_gain = out[:, 64:].mean() - 0.9
    ok = worst_rec <= 1e-3 and brightening and dark_gain > bright_gain
    verdict(9, ok, f"max reconstruction err {worst_rec:.1e} (<= 1e-3), brightening={brightening}, "
                   f"dark gain {dark_gain:.3f} > bright gain {bright_gain:.3f}")
    assert ok


def test_10_fusion_benefit(verdict, tmp_path):
    t0 = time.perf_counter()
    comp = complementary_errors(CORPUS, tmp_path / "comp", epsilon=0.2)
    dup = shifted_duplicates(CORPUS, tmp_path / "dup", epsilon=0.2, shift=(3, 2))
    dt = time.perf_counter() - t0
    f1_a, f1_b, f1_f = comp["pred_a"]["f1"], comp["pred_b"]["f1"], comp["fused"]["f1"]
    gap = dup["fused"]["miou"] - dup["unaligned"]["miou"]
    ok = f1_f >= max(f1_a, f1_b) and gap >= 0.05 and dt < 120
    verdict(10, ok, f"complementary F1 A {f1_a:.3f} B {f1_b:.3f} fused {f1_f:.3f}; shifted mIoU fused "
                    f"{dup['fused']['miou']:.3f} vs unaligned {dup['unaligned']['miou']:.3f} "
                    f"(gap {gap:.3f} >= 0.05); {dt:.1f} s (< 120 s)")
    assert ok


def test_11_determinism(verdict, tmp_path):
    run_pipeline(cfg_for(tmp_path / "first"))
    run_pipeline(cfg_for(tmp_path / "second"))
    a, b = artifact_bytes(tmp_path / "first"), artifact_bytes(tmp_path / "second")
    ok = a == b and len(a) > 3
    verdict(11, ok, f"two seeded runs: {len(a)} report/mask/image files byte-identical={a == b}")
    assert ok
