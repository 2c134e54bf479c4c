"""Command-line front end.

Exit codes: 0 true/consistent, 1 false/inconsistent, 2 usage or input error,
3 a resource guard stopped the computation.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import instances
from .certificate import build_certificate
from .config import ResourceLimit, reset_limits, set_limits
from .errors import ConditionAFails, NotIntegerEmpty
from .exact_core import format_rational
from .ls_operators import iterate_emptiness
from .perm_group import PermGroup, format_group, is_k_transitive, read_group, transitivity_degree
from .polytope import (
    VPolytope,
    certify_invariance,
    format_h,
    format_objective,
    intersects_all_faces,
    is_feasible,
    is_integer_empty,
    read_h,
    read_v,
)
from .sa_hierarchy import format_savector, sa_emptiness
from .theorem import run_theorem

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


def _plain(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def render(tree: dict, as_json: bool) -> str:
    tree = _plain(tree)
    if as_json:
        return json.dumps(tree, indent=2) + "\n"
    lines: list[str] = []

    def walk(prefix: str, v: Any):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else k, x)
        elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        elif isinstance(v, list):
            lines.append(f"{prefix}: " + " ".join(str(x) for x in v))
        elif isinstance(v, bool):
            lines.append(f"{prefix}: {'true' if v else 'false'}")
        elif v is None:
            lines.append(f"{prefix}: none")
        else:
            lines.append(f"{prefix}: {v}")

    walk("", tree)
    return "\n".join(lines) + "\n"


def _emit(args, tree: dict) -> None:
    sys.stdout.write(render(tree, args.json))


# ---------------------------------------------------------------- subcommands


def cmd_gen(args) -> int:
    fam = args.family.replace("-", "_")
    params: dict[str, Any] = {}
    if fam in ("parity", "cropped_cube", "knapsack_cover", "sts"):
        if args.n is None:
            raise ValueError(f"family {args.family} needs --n")
        params["n"] = args.n
    if fam == "orbit_hull":
        if not (args.points and args.group):
            raise ValueError("orbit-hull needs --points and --group")
        V: VPolytope = read_v(args.points)
        params = {"points": V.points, "group": read_group(args.group)}
    inst = instances.InstanceSpec(fam, params).build()
    text = format_h(inst.polytope)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_TRUE
    out = Path(args.out)
    out.write_text(text)
    written = [str(out)]
    grp = out.with_suffix(".grp")
    grp.write_text(format_group(inst.group))
    written.append(str(grp))
    if inst.objective is not None:
        obj = out.with_suffix(".obj")
        obj.write_text(format_objective(inst.objective))
        written.append(str(obj))
    _emit(args, {"instance": inst.name, "rows": len(inst.polytope.non_box_rows()), "written": written})
    return EXIT_TRUE


def cmd_check(args) -> int:
    what = args.what
    if what == "transitivity":
        if args.group is None or args.k is None:
            raise ValueError("transitivity needs --group and --k")
        G = read_group(args.group)
        ok = is_k_transitive(G, args.k)
        _emit(args, {"check": what, "k": args.k, "result": ok, "degree": transitivity_degree(G)})
        return EXIT_TRUE if ok else EXIT_FALSE
    if args.polytope is None:
        raise ValueError(f"check {what} needs a polytope file")
    P = read_h(args.polytope)
    if what == "feasible":
        out = is_feasible(P)
        tree = {"check": what, "result": out.feasible, "status": out.status}
        if out.point is not None:
            tree["witness"] = list(out.point)
        if out.farkas is not None:
            tree["farkas"] = list(out.farkas)
        _emit(args, tree)
        return EXIT_TRUE if out.feasible else EXIT_FALSE
    if what == "integer-empty":
        ok = is_integer_empty(P)
        _emit(args, {"check": what, "result": ok})
        return EXIT_TRUE if ok else EXIT_FALSE
    if what == "faces":
        if args.k is None:
            raise ValueError("faces needs --k")
        ok, face = intersects_all_faces(P, args.k)
        _emit(args, {"check": what, "k": args.k, "result": ok, "failing_face": str(face) if face else None})
        return EXIT_TRUE if ok else EXIT_FALSE
    if what == "invariance":
        if args.group is None:
            raise ValueError("invariance needs --group")
        res = certify_invariance(P, read_group(args.group))
        _emit(args, {"check": what, "result": res.ok, "generator": res.generator, "row": res.row})
        return EXIT_TRUE if res.ok else EXIT_FALSE
    raise ValueError(f"unknown check {what!r}")


def cmd_sa(args) -> int:
    P = read_h(args.polytope)
    res = sa_emptiness(P, args.k)
    tree: dict[str, Any] = {"k": args.k, "status": res.status, "empty": res.empty}
    if res.farkas is not None:
        tree["farkas_support"] = sum(1 for v in res.farkas if v)
    if res.witness is not None:
        tree["level1"] = list(res.witness.level1())
        if args.out:
            Path(args.out).write_text(format_savector(res.witness))
            tree["witness_file"] = args.out
    _emit(args, tree)
    return EXIT_GUARD if res.status == "iteration-limit" else EXIT_TRUE


def _cmd_ls(args, op: str) -> int:
    P = read_h(args.polytope)
    rep = iterate_emptiness(P, op, args.k)
    tree: dict[str, Any] = {"operator": op, "rounds": {str(r + 1): s for r, s in enumerate(rep.rounds)}}
    if rep.witnesses and rep.witnesses[0] is not None:
        tree["round1_x"] = list(rep.witnesses[0].x)
    _emit(args, tree)
    return EXIT_TRUE


def cmd_certify(args) -> int:
    P = read_h(args.polytope)
    G = read_group(args.group)
    k = args.k
    degree = transitivity_degree(G, upto=min(k + 1, P.n))
    invariant = certify_invariance(P, G).ok
    tree: dict[str, Any] = {"k": k, "transitivity_certificate": degree, "group_leaves_P_invariant": invariant}
    if degree < k + 1 or not invariant:
        tree["status"] = "hypotheses-unmet"
        _emit(args, tree)
        return EXIT_FALSE
    try:
        rep = build_certificate(
            P, k, tail=args.tail, allow_not_integer_empty=args.allow_not_integer_empty
        )
    except ConditionAFails as exc:
        tree["status"] = "condition-A-fails"
        tree["face"] = str(exc.face)
        _emit(args, tree)
        return EXIT_FALSE
    except NotIntegerEmpty as exc:
        tree["status"] = "not-integer-empty"
        tree["detail"] = str(exc)
        _emit(args, tree)
        return EXIT_FALSE
    tree.update(
        {
            "status": "verified",
            "delta": list(rep.delta.values),
            "omega": rep.solution.omega,
            "rho": list(rep.solution.rho),
            "lambda": list(rep.solution.lam),
            "gamma": list(rep.solution.gamma),
            "value": rep.value,
            "warnings": list(rep.delta.warnings),
            "checks": dict(rep.checks),
        }
    )
    if args.out:
        Path(args.out).write_text(format_savector(rep.y))
        tree["witness_file"] = args.out
    _emit(args, tree)
    return EXIT_TRUE


def cmd_theorem(args) -> int:
    P = read_h(args.polytope)
    G = read_group(args.group)
    rep = run_theorem(P, G, args.k_max)
    _emit(args, rep.as_dict())
    return EXIT_TRUE if rep.consistent else EXIT_FALSE


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hierarchy-collapse", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--guard-vertices", type=int, help="row cap for brute-force vertex enumeration")
    p.add_argument("--guard-pivots", type=int, help="simplex pivot cap per LP")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write an instance as an H-representation")
    g.add_argument(
        "family",
        choices=[
            "parity",
            "cropped-cube",
            "knapsack-cover",
            "sts",
            "sts-face",
            "three-point",
            "cyclic-counterexample",
            "orbit-hull",
        ],
    )
    g.add_argument("--n", type=int)
    g.add_argument("--points")
    g.add_argument("--group")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="single checks on a polytope or group")
    c.add_argument("what", choices=["feasible", "integer-empty", "faces", "invariance", "transitivity"])
    c.add_argument("polytope", nargs="?")
    c.add_argument("--group")
    c.add_argument("--k", type=int)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sa", help="Sherali-Adams emptiness at level k")
    s.add_argument("polytope")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", help="write the witness vector here")
    s.set_defaults(func=cmd_sa)

    for name, op in (("ls", "LS"), ("ls0", "LS0")):
        q = sub.add_parser(name, help=f"per-round {op} emptiness")
        q.add_argument("polytope")
        q.add_argument("--k", type=int, required=True)
        q.set_defaults(func=lambda a, op=op: _cmd_ls(a, op))

    ce = sub.add_parser("certify", help="build and verify the explicit level-k witness")
    ce.add_argument("polytope")
    ce.add_argument("--group", required=True)
    ce.add_argument("--k", type=int, required=True)
    ce.add_argument("--tail", choices=["any", "min"], default="any")
    ce.add_argument("--allow-not-integer-empty", action="store_true")
    ce.add_argument("--out")
    ce.set_defaults(func=cmd_certify)

    t = sub.add_parser("theorem", help="tabulate every equivalent condition for k = 0..k_max")
    t.add_argument("polytope")
    t.add_argument("--group", required=True)
    t.add_argument("--k-max", type=int, required=True)
    t.set_defaults(func=cmd_theorem)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    reset_limits()
    overrides = {}
    if args.guard_vertices is not None:
        overrides["vertex_rows"] = args.guard_vertices
    if args.guard_pivots is not None:
        overrides["pivots"] = args.guard_pivots
    if overrides:
        set_limits(**overrides)
    try:
        return args.func(args)
    except ResourceLimit as exc:
        sys.stderr.write(f"resource guard: {exc}\n")
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
