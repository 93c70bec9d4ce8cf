"""Fusion ablations on the fixture corpus.

Two scenarios, each evaluated for model A, model B, aligned fusion and
unaligned fusion:

* complementary: A never predicts one class, B never predicts another,
  unmatched instances are kept;
* shifted: two noisy predictions with A offset by a known shift.

    python3 scripts/run_ablation.py [--corpus tests/data/corpus] [--out ablation_out] [--epsilon 0.2]
"""

import argparse
import json
from pathlib import Path

from mineseg.experiments import complementary_errors, shifted_duplicates

ROOT = Path(__file__).resolve().parents[1]


def table(name, result):
    print(f"\n{name}")
    print(f"  {'set':<10} {'F1':>7} {'mIoU':>7}")
    for key in ("pred_a", "pred_b", "fused", "unaligned"):
        print(f"  {key:<10} {result[key]['f1']:7.3f} {result[key]['miou']:7.3f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", default=str(ROOT / "tests" / "data" / "corpus"))
    ap.add_argument("--out", default="ablation_out")
    ap.add_argument("--epsilon", type=float, default=0.2)
    ap.add_argument("--shift", type=float, nargs=2, default=(3, 2))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    comp = complementary_errors(args.corpus, out / "complementary", epsilon=args.epsilon, seed=args.seed)
    dup = shifted_duplicates(args.corpus, out / "shifted", epsilon=args.epsilon, shift=tuple(args.shift),
                             seed=args.seed)
    table("complementary errors (keep_unmatched)", comp)
    table(f"shifted duplicates (shift {tuple(args.shift)})", dup)
    (out / "summary.json").write_text(json.dumps({"complementary": comp, "shifted": dup}, indent=2) + "\n")


if __name__ == "__main__":
    main()
