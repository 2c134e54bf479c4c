"""Decide condition (A), SA, LS and LS_0 emptiness side by side for k = 0..k_max.

Under a (k+1)-transitive symmetry group and an integer-empty P these four
questions have the same answer; the runner checks that they do.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .config import ResourceLimit
from .ls_operators import iterate_emptiness
from .perm_group import PermGroup, transitivity_degree
from .polytope import (
    CubeFace,
    HPolytope,
    certify_invariance,
    intersects_all_faces,
    is_feasible,
    is_integer_empty,
)
from .sa_hierarchy import sa_emptiness


@dataclass
class TheoremRow:
    k: int
    condition_A: bool | None
    failing_face: CubeFace | None
    sa_empty: bool | None
    ls_empty: bool | None  # None: guard-skipped
    ls0_empty: bool | None
    hypotheses: bool  # (k+1)-transitive certificate and integer-emptiness
    consistent: bool | None  # None when hypotheses are unmet

    def as_dict(self) -> dict:
        def fmt(v):
            return "guard-skipped" if v is None else v

        return {
            "k": self.k,
            "condition_A": fmt(self.condition_A),
            "failing_face": str(self.failing_face) if self.failing_face else None,
            "SA_empty": fmt(self.sa_empty),
            "LS_empty": fmt(self.ls_empty),
            "LS0_empty": fmt(self.ls0_empty),
            "hypotheses_hold": self.hypotheses,
            "consistent": "not-applicable" if self.consistent is None else self.consistent,
        }


@dataclass
class TheoremReport:
    n: int
    k_max: int
    transitivity_certificate: int
    invariant: bool
    integer_empty: bool
    rows: list[TheoremRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(r.consistent is not False for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k_max": self.k_max,
            "group_leaves_P_invariant": self.invariant,
            "integer_empty": self.integer_empty,
            "transitivity_certificate": self.transitivity_certificate,
            "rows": [r.as_dict() for r in self.rows],
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def _guarded(fn, *args):
    try:
        return fn(*args)
    except ResourceLimit:
        return None


def run_theorem(P: HPolytope, G: PermGroup, k_max: int) -> TheoremReport:
    """Tabulate (A), SA^k emptiness and LS^k / LS_0^k emptiness.

    Levels run up to min(k_max, n); at k = n condition (A) concerns the
    vertices of the cube, so it is the integer-emptiness question itself.
    A row is held to the biconditional only when G is (k+1)-transitive (for
    k = n: n-transitive) and P is integer-empty; other rows are reported as
    not applicable.
    """
    n = P.n
    top = min(k_max, n)
    inv = _guarded(certify_invariance, P, G)
    invariant = bool(inv)
    try:
        degree = transitivity_degree(G, upto=min(top + 1, n))
    except ResourceLimit:
        degree = 0
    integer_empty = is_integer_empty(P)
    report = TheoremReport(n, k_max, degree, invariant, integer_empty)
    if inv is None:
        report.notes.append("invariance could not be certified within the pivot guard")
    elif not invariant:
        report.notes.append("the supplied generators do not leave P invariant")
    ls = iterate_emptiness(P, "LS", top) if top >= 1 else None
    ls0 = iterate_emptiness(P, "LS0", top) if top >= 1 else None
    for k in range(top + 1):
        condA, face = _guarded(intersects_all_faces, P, k) or (None, None)
        sa = sa_emptiness(P, k).empty
        if k == 0:
            feas = _guarded(is_feasible, P)  # zero rounds leave P itself
            ls_e = ls0_e = None if feas is None else not feas.feasible
        else:
            ls_e = ls.empty_at(k)
            ls0_e = ls0.empty_at(k)
        hyp = invariant and integer_empty and degree >= min(k + 1, n)
        consistent = None
        if hyp:
            fails = None if condA is None else not condA
            vals = [v for v in (fails, sa, ls_e, ls0_e) if v is not None]
            consistent = len(set(vals)) == 1
        report.rows.append(TheoremRow(k, condA, face, sa, ls_e, ls0_e, hyp, consistent))
    if not integer_empty:
        report.notes.append("P contains a 0/1 point; the symmetric equivalence does not apply")
    if any(not r.hypotheses for r in report.rows) and integer_empty and invariant:
        report.notes.append(
            f"G is certified only {degree}-transitive; rows above k = {max(degree - 1, 0)} are not covered"
        )
    return report
