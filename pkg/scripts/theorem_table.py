"""Tabulate the equivalent emptiness conditions for a batch of instances.

    python scripts/theorem_table.py --k-max 2 --out results/theorem_table.json
"""
from __future__ import annotations

import argparse
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from hierarchy_collapse.cli import render
from hierarchy_collapse.instances import InstanceSpec
from hierarchy_collapse.theorem import run_theorem

log = logging.getLogger("theorem_table")


@dataclass
class TableConfig:
    k_max: int = 2
    instances: list[InstanceSpec] = field(
        default_factory=lambda: [
            InstanceSpec("parity", {"n": 3}),
            InstanceSpec("parity", {"n": 5}),
            InstanceSpec("cropped_cube", {"n": 2}),
            InstanceSpec("cropped_cube", {"n": 3}),
            InstanceSpec("three_point"),
            InstanceSpec("cyclic_counterexample"),
        ]
    )


def cell(v) -> str:
    if v is None:
        return "skip"
    return "E" if v else "-"


def run(cfg: TableConfig) -> dict:
    out = {}
    for spec in cfg.instances:
        inst = spec.build()
        t0 = time.perf_counter()
        rep = run_theorem(inst.polytope, inst.group, cfg.k_max)
        log.info("%s done in %.1fs", inst.name, time.perf_counter() - t0)
        out[inst.name] = rep
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=TableConfig.k_max)
    ap.add_argument("--out", type=Path, help="write the full reports as JSON")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cfg = TableConfig(k_max=args.k_max)
    reports = run(cfg)

    print(f"{'instance':<24}{'k':>3}  {'(A)':>5} {'SA':>5} {'LS':>5} {'LS0':>5}  verdict")
    for name, rep in reports.items():
        for r in rep.rows:
            verdict = {True: "consistent", False: "INCONSISTENT", None: "n/a"}[r.consistent]
            a = "-" if r.condition_A is None else ("yes" if r.condition_A else "no")
            print(f"{name:<24}{r.k:>3}  {a:>5} {cell(r.sa_empty):>5} {cell(r.ls_empty):>5} {cell(r.ls0_empty):>5}  {verdict}")
    print("(E = empty, - = nonempty, skip = resource guard)")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        payload = {"config": {"k_max": cfg.k_max, "instances": [asdict(s) for s in cfg.instances]}}
        payload["reports"] = {n: json.loads(render(r.as_dict(), True)) for n, r in reports.items()}
        args.out.write_text(json.dumps(payload, indent=2) + "\n")


if __name__ == "__main__":
    main()
