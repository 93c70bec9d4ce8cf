"""Transform recovery on warped textured images.

    python3 scripts/run_alignment_experiment.py [--n 50] [--size 256] [--seed 0] [--out results.json]
"""

import argparse
import json
from pathlib import Path

from mineseg.experiments import alignment_trials, summarize_trials


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()
    trials = alignment_trials(args.n, args.size, args.seed)
    summary = summarize_trials(trials)
    for t in trials:
        flag = "ok " if t.recovered else "BAD"
        print(f"{flag} #{t.index:02d} s={t.truth.scale:.3f} th={t.truth.theta:+.3f} "
              f"err={t.error_px:.3f}px {t.fallback or ''}")
    print(json.dumps(summary, indent=2))
    if args.out:
        doc = {"summary": summary, "trials": [t.to_dict() for t in trials]}
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
