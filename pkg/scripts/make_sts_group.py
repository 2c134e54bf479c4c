"""Write generators of AGL(2, 3) acting on the 9 points of the Steiner instance.

Point i (1..9) is the vector (a, b) with i - 1 = 3a + b.  The generators are
the two unit translations and two matrices generating GL(2, 3).
"""
from __future__ import annotations

import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "hierarchy_collapse" / "data" / "sts2_agl23.grp"


def affine(mat, shift):
    images = []
    for i in range(1, 10):
        a, b = divmod(i - 1, 3)
        a2 = (mat[0][0] * a + mat[0][1] * b + shift[0]) % 3
        b2 = (mat[1][0] * a + mat[1][1] * b + shift[1]) % 3
        images.append(3 * a2 + b2 + 1)
    return images


GENERATORS = [
    affine([[1, 0], [0, 1]], (1, 0)),
    affine([[1, 0], [0, 1]], (0, 1)),
    affine([[1, 1], [0, 1]], (0, 0)),
    affine([[0, 1], [2, 0]], (0, 0)),
]


def main(out: Path = OUT) -> None:
    lines = ["# AGL(2,3) on the points of AG(2,3); point i is (a, b) with i - 1 = 3a + b", f"G 9 {len(GENERATORS)}"]
    lines += [" ".join(map(str, g)) for g in GENERATORS]
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else OUT)
