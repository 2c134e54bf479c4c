"""H- and V-representations inside the unit cube and the exact operations on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Sequence

from . import lp_exact
from .config import ResourceLimit, limits
from .exact_core import (
    Q,
    SingularMatrixError,
    dot,
    format_rational,
    nullspace,
    parse_rational,
    primitive,
    solve,
)
from .perm_group import PermGroup, act_on_vector

HRow = tuple[tuple[Fraction, ...], Fraction]


def _unit(n: int, i: int, v: int = 1) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) if j == i else Fraction(0) for j in range(n))


def box_rows(n: int) -> list[HRow]:
    rows = []
    for i in range(n):
        rows.append((_unit(n, i), Fraction(0)))
        rows.append((_unit(n, i, -1), Fraction(-1)))
    return rows


def row_key(a: Sequence[Fraction], b: Fraction) -> tuple[int, ...]:
    """Canonical key: rows that are positive multiples of each other share a key."""
    return primitive(list(a) + [b])


def normalized_row(a: Sequence[Fraction], b: Fraction) -> HRow:
    """The positive multiple of the row with coprime integer entries."""
    key = row_key(a, b)
    if not any(key):
        return tuple(Fraction(0) for _ in a), Fraction(b)
    return tuple(Fraction(v) for v in key[:-1]), Fraction(key[-1])


@dataclass(frozen=True)
class HPolytope:
    """{x : a.x >= b for every row}; the 2n box rows are always present."""

    n: int
    rows: tuple[HRow, ...]

    @classmethod
    def from_rows(cls, n: int, rows: Iterable[tuple[Sequence, object]]) -> HPolytope:
        if n < 1:
            raise ValueError("dimension must be at least 1")
        out: list[HRow] = []
        seen: set[tuple[int, ...]] = set()
        for a, b in list(rows) + box_rows(n):
            a = tuple(Q(v) for v in a)
            if len(a) != n:
                raise ValueError(f"row has {len(a)} coefficients, expected {n}")
            b = Q(b)
            key = row_key(a, b)
            if key in seen:
                continue
            seen.add(key)
            out.append((a, b))
        return cls(n, tuple(out))

    @classmethod
    def cube(cls, n: int) -> HPolytope:
        return cls.from_rows(n, [])

    @classmethod
    def empty(cls, n: int) -> HPolytope:
        return cls.from_rows(n, [((Fraction(0),) * n, Fraction(1))])

    def non_box_rows(self) -> list[HRow]:
        box = {row_key(a, b) for a, b in box_rows(self.n)}
        return [(a, b) for a, b in self.rows if row_key(a, b) not in box]

    def with_rows(self, extra: Iterable[tuple[Sequence, object]]) -> HPolytope:
        return HPolytope.from_rows(self.n, list(self.rows) + list(extra))

    def violated_row(self, x: Sequence) -> int | None:
        x = [Q(v) for v in x]
        for idx, (a, b) in enumerate(self.rows):
            if dot(a, x) < b:
                return idx
        return None

    def contains(self, x: Sequence) -> bool:
        return len(x) == self.n and self.violated_row(x) is None


@dataclass(frozen=True)
class VPolytope:
    n: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(Q(v) for v in p) for p in self.points)
        for p in pts:
            if len(p) != self.n:
                raise ValueError("point has the wrong dimension")
            if any(v < 0 or v > 1 for v in p):
                raise ValueError(f"point {p} lies outside the unit cube")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class CubeFace:
    S0: frozenset[int]
    S1: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "S0", frozenset(self.S0))
        object.__setattr__(self, "S1", frozenset(self.S1))
        if self.S0 & self.S1:
            raise ValueError("a coordinate cannot be fixed to both 0 and 1")

    def __str__(self) -> str:
        fixed = sorted([(i, 0) for i in self.S0] + [(i, 1) for i in self.S1])
        return "{" + ",".join(f"x{i}={v}" for i, v in fixed) + "}"


def restrict_face(P: HPolytope, face: CubeFace) -> HPolytope:
    extra = []
    for i in sorted(face.S0 | face.S1):
        if not 1 <= i <= P.n:
            raise ValueError(f"coordinate {i} outside 1..{P.n}")
        v = 1 if i in face.S1 else 0
        extra.append((_unit(P.n, i - 1), v))
        extra.append((_unit(P.n, i - 1, -1), -v))
    return P.with_rows(extra)


def is_feasible(P: HPolytope) -> lp_exact.LPOutcome:
    return lp_exact.decided(lp_exact.feasible(P))


def optimize(P: HPolytope, c: Sequence, sense: str = "min") -> lp_exact.LPOutcome:
    return lp_exact.decided(lp_exact.optimize(P, c, sense))


def _integer_rows(P: HPolytope) -> list[tuple[list[int], int]]:
    out = []
    for a, b in P.rows:
        key = row_key(a, b)
        out.append((list(key[:-1]), key[-1]))
    return out


def integer_points(P: HPolytope, first_only: bool = False) -> list[tuple[int, ...]]:
    """All 0/1 points of P by depth-first enumeration with bound pruning."""
    n = P.n
    if n > limits().integer_dim:
        raise ResourceLimit("use-explicit-bound", f"0/1 enumeration refused for n={n}")
    rows = _integer_rows(P)
    # optimistic completion: sum of positive coefficients over the still-free suffix
    suffix = [[0] * (n + 1) for _ in rows]
    for r, (a, _) in enumerate(rows):
        for j in range(n - 1, -1, -1):
            suffix[r][j] = suffix[r][j + 1] + max(a[j], 0)
    found: list[tuple[int, ...]] = []
    x = [0] * n
    partial = [0] * len(rows)

    def rec(j: int) -> bool:
        for r, (a, b) in enumerate(rows):
            if partial[r] + suffix[r][j] < b:
                return False
        if j == n:
            found.append(tuple(x))
            return first_only
        for v in (0, 1):
            x[j] = v
            if v:
                for r, (a, _) in enumerate(rows):
                    partial[r] += a[j]
            stop = rec(j + 1)
            if v:
                for r, (a, _) in enumerate(rows):
                    partial[r] -= a[j]
            if stop:
                return True
        x[j] = 0
        return False

    rec(0)
    return found


def is_integer_empty(P: HPolytope) -> bool:
    return not integer_points(P, first_only=True)


def integer_optimum(P: HPolytope, c: Sequence, sense: str = "min") -> tuple[Fraction, tuple[int, ...]] | None:
    """Best 0/1 point of P by enumeration; None when P has no 0/1 point."""
    best = None
    for x in integer_points(P):
        val = dot([Q(v) for v in c], x)
        if best is None or (val < best[0] if sense == "min" else val > best[0]):
            best = (val, x)
    return best


def cube_faces(n: int, k: int) -> Iterable[CubeFace]:
    """Faces fixing k coordinates. S runs in lexicographic order; within S the
    assignments run from all-ones down to all-zeros."""
    for S in combinations(range(1, n + 1), k):
        for bits in product((1, 0), repeat=k):
            yield CubeFace(
                frozenset(i for i, b in zip(S, bits) if b == 0),
                frozenset(i for i, b in zip(S, bits) if b == 1),
            )


def canonical_faces(n: int, k: int) -> list[CubeFace]:
    """P_l for l = k..0: coordinates 1..l at 1 and l+1..k at 0."""
    return [
        CubeFace(frozenset(range(l + 1, k + 1)), frozenset(range(1, l + 1)))
        for l in range(k, -1, -1)
    ]


def intersects_all_faces(
    P: HPolytope, k: int, symmetric: bool = False
) -> tuple[bool, CubeFace | None]:
    """Condition (A): P meets every face with k fixed coordinates.

    With ``symmetric=True`` only the k+1 canonical faces are tested; this is
    sound only when the caller holds a (k+1)-transitivity certificate for a
    group leaving P invariant.
    """
    if not 0 <= k <= P.n:
        raise ValueError(f"level must lie in 0..{P.n}")
    faces = canonical_faces(P.n, k) if symmetric else cube_faces(P.n, k)
    for face in faces:
        if not is_feasible(restrict_face(P, face)).feasible:
            return False, face
    return True, None


def vertices(P: HPolytope) -> VPolytope:
    n = P.n
    lim = limits()
    if n > lim.vertex_dim or len(P.rows) > lim.vertex_rows:
        raise ResourceLimit(
            "vertex-guard", f"n={n}, rows={len(P.rows)} exceeds ({lim.vertex_dim}, {lim.vertex_rows})"
        )
    found: dict[tuple[Fraction, ...], None] = {}
    for subset in combinations(range(len(P.rows)), n):
        m = [list(P.rows[i][0]) for i in subset]
        rhs = [P.rows[i][1] for i in subset]
        try:
            x = tuple(solve(m, rhs))
        except SingularMatrixError:
            continue
        if x not in found and P.contains(x):
            found[x] = None
    return VPolytope(n, tuple(sorted(found)))


def hull(V: VPolytope) -> HPolytope:
    """Exact facet description of conv(V), including the equalities of its affine hull."""
    n = V.n
    pts = list(dict.fromkeys(V.points))
    lim = limits()
    if n > lim.hull_dim or len(pts) > lim.hull_points:
        raise ResourceLimit("hull-guard", f"n={n}, points={len(pts)}")
    if not pts:
        return HPolytope.empty(n)
    p0 = pts[0]
    dirs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    rows: list[tuple[Sequence, Fraction]] = []
    # equalities: normals orthogonal to every direction
    normals = nullspace(dirs, n) if dirs else [list(_unit(n, i)) for i in range(n)]
    for w in normals:
        rows.append(normalized_row(w, dot(w, p0)))
        rows.append(normalized_row([-v for v in w], -dot(w, p0)))
    # basis of the direction space
    basis = nullspace(normals, n) if normals else [list(_unit(n, i)) for i in range(n)]
    d = len(basis)
    if d > 0:
        seen: set[tuple[int, ...]] = set()
        for subset in combinations(range(len(pts)), d):
            q = [pts[i] for i in subset]
            eqs = [[dot(bv, [a - b for a, b in zip(qi, q[0])]) for bv in basis] for qi in q[1:]]
            alphas = nullspace(eqs, d) if eqs else [[Fraction(1)]]
            if len(alphas) != 1:
                continue
            h = [sum((al * bv[j] for al, bv in zip(alphas[0], basis)), Fraction(0)) for j in range(n)]
            beta = dot(h, q[0])
            vals = [dot(h, p) for p in pts]
            if all(v >= beta for v in vals):
                cand = (h, beta)
            elif all(v <= beta for v in vals):
                cand = ([-v for v in h], -beta)
            else:
                continue
            key = row_key(*cand)
            if key not in seen:
                seen.add(key)
                rows.append(normalized_row(*cand))
    return remove_redundant(HPolytope.from_rows(n, rows))


def remove_redundant(P: HPolytope) -> HPolytope:
    """Drop non-box rows implied by the others, one LP per row."""
    box = {row_key(a, b) for a, b in box_rows(P.n)}
    keep = list(P.rows)
    if not lp_exact.decided(lp_exact.feasible(P)).feasible:
        return HPolytope.empty(P.n)
    idx = 0
    while idx < len(keep):
        a, b = keep[idx]
        if row_key(a, b) in box:
            idx += 1
            continue
        others = keep[:idx] + keep[idx + 1 :]
        out = lp_exact.decided(lp_exact.solve(P.n, others, a, "min"))
        if out.status == "optimal" and out.value >= b:
            keep = others
        else:
            idx += 1
    return HPolytope(P.n, tuple(keep))


def implies_row(P: HPolytope, a: Sequence, b) -> bool:
    """Whether a.x >= b holds on all of P (vacuously true when P is empty)."""
    out = lp_exact.decided(lp_exact.solve(P.n, P.rows, list(a), "min"))
    if out.status == "infeasible":
        return True
    return out.status == "optimal" and out.value >= Q(b)


def contains_polytope(outer: HPolytope, inner: HPolytope) -> bool:
    return all(implies_row(inner, a, b) for a, b in outer.rows)


def same_set(P: HPolytope, R: HPolytope) -> bool:
    return contains_polytope(P, R) and contains_polytope(R, P)


@dataclass(frozen=True)
class InvarianceResult:
    ok: bool
    generator: int | None = None
    row: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def certify_invariance(P: HPolytope, G: PermGroup) -> InvarianceResult:
    """Check that every generator maps each row to an inequality valid on P."""
    if G.n != P.n:
        raise ValueError("group and polytope dimensions differ")
    keys = {row_key(a, b) for a, b in P.rows}
    for gi, g in enumerate(G.generators):
        for ri, (a, b) in enumerate(P.rows):
            ga = act_on_vector(g, list(a))
            if row_key(ga, b) in keys:
                continue
            if not implies_row(P, ga, b):
                return InvarianceResult(False, gi, ri)
    return InvarianceResult(True)


# ---------------------------------------------------------------- file formats


def _content_lines(text: str) -> list[list[str]]:
    return [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def parse_h(text: str) -> HPolytope:
    lines = _content_lines(text)
    if not lines or lines[0][0] != "H" or len(lines[0]) != 3:
        raise ValueError("H-rep must start with 'H n m'")
    n, m = int(lines[0][1]), int(lines[0][2])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"expected {m} rows, found {len(body)}")
    rows = []
    for toks in body:
        if len(toks) != n + 1:
            raise ValueError(f"row has {len(toks)} tokens, expected {n + 1}")
        vals = [parse_rational(t) for t in toks]
        rows.append((vals[1:], vals[0]))
    return HPolytope.from_rows(n, rows)


def format_h(P: HPolytope, include_box: bool = False) -> str:
    rows = list(P.rows) if include_box else P.non_box_rows()
    lines = [f"H {P.n} {len(rows)}"]
    for a, b in rows:
        lines.append(" ".join(format_rational(v) for v in (b, *a)))
    return "\n".join(lines) + "\n"


def parse_v(text: str) -> VPolytope:
    lines = _content_lines(text)
    if not lines or lines[0][0] != "V" or len(lines[0]) != 3:
        raise ValueError("V-rep must start with 'V n p'")
    n, p = int(lines[0][1]), int(lines[0][2])
    body = lines[1:]
    if len(body) != p:
        raise ValueError(f"expected {p} points, found {len(body)}")
    pts = []
    for toks in body:
        if len(toks) != n:
            raise ValueError(f"point has {len(toks)} tokens, expected {n}")
        pts.append(tuple(parse_rational(t) for t in toks))
    return VPolytope(n, tuple(pts))


def format_v(V: VPolytope) -> str:
    lines = [f"V {V.n} {len(V.points)}"]
    lines += [" ".join(format_rational(v) for v in p) for p in V.points]
    return "\n".join(lines) + "\n"


def parse_objective(text: str) -> tuple[Fraction, ...]:
    lines = _content_lines(text)
    if not lines or lines[0][0] != "C" or len(lines[0]) != 2:
        raise ValueError("objective file must start with 'C n'")
    n = int(lines[0][1])
    vals = [parse_rational(t) for toks in lines[1:] for t in toks]
    if len(vals) != n:
        raise ValueError(f"expected {n} objective coefficients, found {len(vals)}")
    return tuple(vals)


def format_objective(c: Sequence) -> str:
    return f"C {len(c)}\n" + " ".join(format_rational(Q(v)) for v in c) + "\n"


def read_h(path: str | Path) -> HPolytope:
    return parse_h(Path(path).read_text())


def read_v(path: str | Path) -> VPolytope:
    return parse_v(Path(path).read_text())
