"""Regenerate src/mineseg/fusion/_brief_pattern.py.

256 point pairs drawn i.i.d. from an isotropic Gaussian with sigma = 31/5
around the patch centre (the G II sampling of the original BRIEF
descriptor), rounded to integers and kept inside a radius-15 disc so every
rotated point stays within the 31x31 patch. Identical pairs are redrawn.
The output is frozen in-repo; this script only documents how it was made.
"""

from pathlib import Path

import numpy as np

PATCH = 31
RADIUS = 15
SEED = 20120101


def draw(rng):
    while True:
        p = np.rint(rng.normal(0.0, PATCH / 5.0, size=2)).astype(int)
        if p[0] ** 2 + p[1] ** 2 <= RADIUS**2:
            return p


def main():
    rng = np.random.Generator(np.random.Philox(SEED))
    pairs = []
    while len(pairs) < 256:
        a, b = draw(rng), draw(rng)
        if (a == b).all():
            continue
        pairs.append((*a.tolist(), *b.tolist()))
    out = Path(__file__).resolve().parents[1] / "src/mineseg/fusion/_brief_pattern.py"
    lines = [
        '"""Frozen BRIEF test pairs (x1, y1, x2, y2); see scripts/make_brief_pattern.py."""',
        "",
        f"# Gaussian G II sampling, sigma = {PATCH}/5, disc radius {RADIUS}, Philox seed {SEED}",
        "PAIRS = (",
    ]
    for i in range(0, 256, 4):
        lines.append("    " + " ".join(f"({x1}, {y1}, {x2}, {y2})," for x1, y1, x2, y2 in pairs[i:i + 4]))
    lines.append(")")
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
