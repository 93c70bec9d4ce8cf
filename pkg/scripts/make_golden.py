"""Regenerate golden reference files under tests/data/golden.

Run only when a behaviour change is intended; the tests compare against
these files byte-for-byte.
"""

import json
from pathlib import Path

from mineseg.dataset import DegradeConfig, degrade
from mineseg.evaluation import evaluate_sets
from mineseg.mock import mock_segment
from mineseg.raster import ensure_dir, load_instance_dir, read_image, write_image

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "tests" / "data" / "corpus"
GOLDEN = ROOT / "tests" / "data" / "golden"

DEGRADE_SEED = 42
DEGRADE_SOURCE = "scene_00.png"
MOCK_EPSILON = 0.2
MOCK_SEED = 0
# half-width of the accepted corpus-F1 band around the reference value
F1_BAND = 0.02


def golden_report() -> dict:
    gts = load_instance_dir(CORPUS / "gt")
    preds = {k: mock_segment(g, MOCK_EPSILON, MOCK_SEED) for k, g in gts.items()}
    return evaluate_sets(preds, gts).to_dict()


def main():
    out = ensure_dir(GOLDEN)
    img = read_image(CORPUS / "images" / DEGRADE_SOURCE)
    write_image(degrade(img, DegradeConfig(seed=DEGRADE_SEED)), out / "degrade_seed42.png")

    report = golden_report()
    (out / "eval_mock_eps0.2.json").write_text(json.dumps(report, indent=2) + "\n")
    f1 = report["aggregate"]["f1"]
    band = {"epsilon": MOCK_EPSILON, "seed": MOCK_SEED, "f1": f1, "low": f1 - F1_BAND, "high": f1 + F1_BAND}
    (out / "mock_f1_band.json").write_text(json.dumps(band, indent=2) + "\n")
    print(f"golden files written to {out} (mock F1 {f1:.4f})")


if __name__ == "__main__":
    main()
