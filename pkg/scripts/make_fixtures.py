"""Regenerate the synthetic low-light corpus under tests/data/corpus.

    python3 scripts/make_fixtures.py [--out tests/data/corpus] [--n 10]
"""

import argparse
from pathlib import Path

from mineseg.raster import ensure_dir, save_instances, write_image
from mineseg.synthetic import render_scene, scene_instances

ROOT = Path(__file__).resolve().parents[1]


def make_corpus(out: Path, n: int = 10, size: int = 192) -> None:
    images, gt = ensure_dir(out / "images"), ensure_dir(out / "gt")
    for i in range(n):
        image_id = f"scene_{i:02d}"
        inst = scene_instances(seed=1000 + i, image_id=image_id, width=size, height=size)
        save_instances(inst, gt / f"{image_id}.json")
        write_image(render_scene(inst, seed=2000 + i), images / f"{image_id}.png")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(ROOT / "tests" / "data" / "corpus"))
    ap.add_argument("--n", type=int, default=10)
    args = ap.parse_args()
    make_corpus(Path(args.out), args.n)
    print(f"wrote {args.n} scenes to {args.out}")


if __name__ == "__main__":
    main()
