"""Level-k value of the explicit witness on the knapsack-cover instance versus
the closed formula 2n(n-1) / (2n^2 - 2nk - 4n + k^2 + 3k + 2).

    python scripts/knapsack_gap.py --pairs 6:2 10:3 12:2
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from hierarchy_collapse.certificate import build_certificate
from hierarchy_collapse.exact_core import format_rational
from hierarchy_collapse.instances import knapsack_cover
from hierarchy_collapse.polytope import integer_optimum


@dataclass(frozen=True)
class GapConfig:
    pairs: tuple[tuple[int, int], ...] = ((6, 1), (6, 2), (8, 2), (10, 3))


def closed_form(n: int, k: int) -> Fraction:
    return Fraction(2 * n * (n - 1), 2 * n * n - 2 * n * k - 4 * n + k * k + 3 * k + 2)


def parse_pair(tok: str) -> tuple[int, int]:
    n, k = tok.split(":")
    return int(n), int(k)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", nargs="*", type=parse_pair, default=list(GapConfig.pairs))
    args = ap.parse_args()
    cfg = GapConfig(pairs=tuple(args.pairs))
    w = csv.writer(sys.stdout)
    w.writerow(["n", "k", "value", "closed_form", "match", "integer_optimum", "seconds"])
    for n, k in cfg.pairs:
        if not 2 * k <= n:
            raise SystemExit(f"k={k} exceeds n/2 for n={n}")
        t0 = time.perf_counter()
        P = knapsack_cover(n)
        rep = build_certificate(P, k, tail="min", allow_not_integer_empty=True)
        val = rep.value
        best, _ = integer_optimum(P, [1] * n)
        w.writerow([n, k, format_rational(val), format_rational(closed_form(n, k)), val == closed_form(n, k),
                    format_rational(best), f"{time.perf_counter() - t0:.2f}"])


if __name__ == "__main__":
    main()
