"""Lift-and-project (LS_0) and Lovasz-Schrijver (LS) operators.

A point x lies in LS_0(P) iff some (n+1)x(n+1) matrix Y with
Y e_0 = Y^T e_0 = diag(Y) = (1, x) has every column Y e_i and every
Y(e_0 - e_i) in the cone K(P) = {(lam, z) : lam >= 0, A z >= lam b}.  LS adds
Y = Y^T.  Because P always carries the box rows, lam = 0 in K(P) forces z = 0,
so this cone is exactly the homogenization {(lam, lam x) : lam >= 0, x in P}.

Single rounds are decided by one joint LP in (x, Y).  Repeated rounds need
an explicit H-description of the closure: LS_0 closures come from vertex
enumeration and convex hulls, LS closures from Fourier-Motzkin projection.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp_exact
from .config import ResourceLimit, limits
from .errors import InternalConsistencyError
from .exact_core import Q, dot, primitive
from .perm_group import reynolds_stabilized
from .polytope import (
    CubeFace,
    HPolytope,
    VPolytope,
    hull,
    is_feasible,
    remove_redundant,
    restrict_face,
    vertices,
)


class _Layout:
    """Column indices of x_1..x_n and the free off-diagonal entries of Y."""

    def __init__(self, n: int, symmetric: bool, anchored: bool):
        self.n = n
        self.symmetric = symmetric
        self.anchored = anchored
        self.pairs: dict[tuple[int, int], int] = {}
        nxt = 0 if anchored else n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                key = (min(i, j), max(i, j)) if symmetric else (i, j)
                if key not in self.pairs:
                    self.pairs[key] = nxt
                    nxt += 1
        self.size = nxt

    def y(self, i: int, j: int) -> int:
        """Variable index of Y_ij for i != j (rows/columns 1..n)."""
        return self.pairs[(min(i, j), max(i, j)) if self.symmetric else (i, j)]


def _lift_rows(P: HPolytope, lay: _Layout, x: Sequence[Fraction] | None):
    """Rows of the lifting system.  With ``x`` given, the diagonal is fixed to x."""
    n = P.n
    rows: list[tuple[dict[int, Fraction], Fraction]] = []

    def add(expr: dict, const: Fraction):
        # expr . vars + const >= 0
        expr = {k: v for k, v in expr.items() if v}
        rows.append((expr, -const))

    def xterm(expr: dict, i: int, coef: Fraction, const: list):
        if x is None:
            expr[i - 1] = expr.get(i - 1, 0) + coef
        else:
            const[0] += coef * x[i - 1]

    for i in range(1, n + 1):
        for a, b in P.rows:
            # column Y e_i: lam = x_i, z_j = Y_ji (z_i = x_i)
            expr: dict[int, Fraction] = {}
            const = [Fraction(0)]
            for j in range(1, n + 1):
                aj = a[j - 1]
                if not aj:
                    continue
                if j == i:
                    xterm(expr, i, aj, const)
                else:
                    v = lay.y(j, i)
                    expr[v] = expr.get(v, 0) + aj
            xterm(expr, i, -b, const)
            add(expr, const[0])
            # column Y(e_0 - e_i): lam = 1 - x_i, z_j = x_j - Y_ji (z_i = 0)
            expr = {}
            const = [-b]
            for j in range(1, n + 1):
                aj = a[j - 1]
                if not aj or j == i:
                    continue
                xterm(expr, j, aj, const)
                v = lay.y(j, i)
                expr[v] = expr.get(v, 0) - aj
            xterm(expr, i, b, const)
            add(expr, const[0])
    if x is None:
        for i in range(n):
            rows.append(({i: Fraction(1)}, Fraction(0)))
            rows.append(({i: Fraction(-1)}, Fraction(-1)))
    return rows


@dataclass(frozen=True)
class LiftMatrix:
    Y: tuple[tuple[Fraction, ...], ...]

    @property
    def x(self) -> tuple[Fraction, ...]:
        return self.Y[0][1:]

    def column(self, i: int) -> tuple[Fraction, ...]:
        return tuple(row[i] for row in self.Y)


def _assemble(n: int, lay: _Layout, xv: Sequence[Fraction], vals: Sequence[Fraction]) -> LiftMatrix:
    Y = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    Y[0][0] = Fraction(1)
    for i in range(1, n + 1):
        Y[0][i] = Y[i][0] = Y[i][i] = xv[i - 1]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                Y[i][j] = vals[lay.y(i, j)]
    return LiftMatrix(tuple(tuple(r) for r in Y))


def in_cone(P: HPolytope, lam: Fraction, z: Sequence[Fraction]) -> bool:
    return lam >= 0 and all(dot(a, z) >= lam * b for a, b in P.rows)


def verify_lift(P: HPolytope, L: LiftMatrix, symmetric: bool) -> bool:
    """Independent check of every defining condition of an LS_0 / LS lifting matrix."""
    Y = L.Y
    n = P.n
    if Y[0][0] != 1:
        return False
    for i in range(1, n + 1):
        if not (Y[0][i] == Y[i][0] == Y[i][i]):
            return False
    if symmetric and any(Y[i][j] != Y[j][i] for i in range(n + 1) for j in range(n + 1)):
        return False
    for i in range(1, n + 1):
        col = L.column(i)
        if not in_cone(P, col[0], col[1:]):
            return False
        rest = [Y[r][0] - Y[r][i] for r in range(n + 1)]
        if not in_cone(P, rest[0], rest[1:]):
            return False
    return True


@dataclass(frozen=True)
class StepResult:
    nonempty: bool
    lift: LiftMatrix | None
    outcome: lp_exact.LPOutcome

    @property
    def x(self):
        return self.lift.x if self.lift else None


def _step(P: HPolytope, symmetric: bool) -> StepResult:
    lay = _Layout(P.n, symmetric, anchored=False)
    out = lp_exact.decided(lp_exact.solve(lay.size, _lift_rows(P, lay, None)))
    if out.status != "optimal":
        return StepResult(False, None, out)
    L = _assemble(P.n, lay, out.point[: P.n], out.point)
    if not verify_lift(P, L, symmetric):
        raise InternalConsistencyError("lifting matrix fails re-verification")
    return StepResult(True, L, out)


def ls0_step_nonempty(P: HPolytope) -> StepResult:
    return _step(P, symmetric=False)


def ls_step_nonempty(P: HPolytope) -> StepResult:
    return _step(P, symmetric=True)


def lift_at(P: HPolytope, x: Sequence, symmetric: bool = False) -> LiftMatrix | None:
    """A lifting matrix anchored at the given x, or None when x is not in the closure."""
    x = [Q(v) for v in x]
    if any(v < 0 or v > 1 for v in x):
        return None
    lay = _Layout(P.n, symmetric, anchored=True)
    rows = _lift_rows(P, lay, x)
    if lay.size == 0:
        ok = all(b <= 0 for a, b in rows)
        return _assemble(P.n, lay, x, []) if ok else None
    out = lp_exact.decided(lp_exact.solve(lay.size, rows))
    if out.status != "optimal":
        return None
    L = _assemble(P.n, lay, x, out.point)
    if not verify_lift(P, L, symmetric):
        raise InternalConsistencyError("anchored lifting matrix fails re-verification")
    return L


def bcc_closure(P: HPolytope, i: int) -> HPolytope:
    """conv(P with x_i = 0  union  P with x_i = 1)."""
    pts = []
    for face in (CubeFace({i}, ()), CubeFace((), {i})):
        pts.extend(vertices(restrict_face(P, face)).points)
    return hull(VPolytope(P.n, tuple(dict.fromkeys(pts))))


def ls0_closure(P: HPolytope) -> HPolytope:
    rows = []
    for i in range(1, P.n + 1):
        rows.extend(bcc_closure(P, i).rows)
    return remove_redundant(HPolytope.from_rows(P.n, rows))


def _fm_key(a: Sequence[Fraction], b: Fraction) -> tuple[int, ...]:
    return primitive(list(a) + [b])


def fourier_motzkin(
    rows: list[tuple[list[Fraction], Fraction]], nvars: int, keep: int
) -> list[tuple[list[Fraction], Fraction]] | None:
    """Project {v : a.v >= b} onto its first ``keep`` coordinates.

    Returns None when the system is infeasible.  Variables are eliminated
    greedily (smallest number of generated rows first) and every intermediate
    system is pruned of duplicate and LP-redundant rows.
    """
    cap = limits().fm_rows
    active = list(range(keep, nvars))
    cur = _prune(rows, nvars)
    if cur is None:
        return None
    while active:
        def cost(v):
            pos = sum(1 for a, _ in cur if a[v] > 0)
            neg = sum(1 for a, _ in cur if a[v] < 0)
            return pos * neg - pos - neg, v

        v = min(active, key=cost)
        active.remove(v)
        pos = [(a, b) for a, b in cur if a[v] > 0]
        neg = [(a, b) for a, b in cur if a[v] < 0]
        nxt = [(a, b) for a, b in cur if a[v] == 0]
        if len(nxt) + len(pos) * len(neg) > cap:
            raise ResourceLimit("fm-rows", f"more than {cap} rows while eliminating")
        for ap, bp in pos:
            for an, bn in neg:
                sp, sn = -an[v], ap[v]
                a = [sp * x + sn * y for x, y in zip(ap, an)]
                nxt.append((a, sp * bp + sn * bn))
        cur = _prune(nxt, nvars)
        if cur is None:
            return None
    out = []
    for a, b in cur:
        key = _fm_key(a, b)
        out.append(([Fraction(v) for v in key[:keep]], Fraction(key[-1])))
    return out


def _prune(rows, nvars):
    seen = set()
    out = []
    for a, b in rows:
        if not any(a):
            if b > 0:
                return None
            continue
        key = _fm_key(a, b)
        if key not in seen:
            seen.add(key)
            out.append((list(a), b))
    if not lp_exact.decided(lp_exact.solve(nvars, out)).feasible:
        return None
    i = 0
    while i < len(out):
        a, b = out[i]
        others = out[:i] + out[i + 1 :]
        res = lp_exact.decided(lp_exact.solve(nvars, others, a, "min"))
        if res.status == "optimal" and res.value >= b:
            out = others
        else:
            i += 1
    return out


def projected_closure(P: HPolytope, symmetric: bool) -> HPolytope:
    """The LS (symmetric) or LS_0 closure as the projection of the lifting system."""
    if P.n > limits().ls_dim:
        raise ResourceLimit("ls-guard", f"projection refused for n={P.n} > {limits().ls_dim}")
    lay = _Layout(P.n, symmetric, anchored=False)
    dense = []
    for expr, b in _lift_rows(P, lay, None):
        a = [Fraction(0)] * lay.size
        for j, v in expr.items():
            a[j] = Fraction(v)
        dense.append((a, Fraction(b)))
    proj = fourier_motzkin(dense, lay.size, P.n)
    if proj is None:
        return HPolytope.empty(P.n)
    return remove_redundant(HPolytope.from_rows(P.n, proj))


def ls_closure(P: HPolytope) -> HPolytope:
    return projected_closure(P, symmetric=True)


@dataclass(frozen=True)
class IterationReport:
    op: str
    rounds: tuple[str, ...]  # per round: "nonempty" | "empty" | "guard-skipped"
    witnesses: tuple

    def empty_at(self, r: int) -> bool | None:
        s = self.rounds[r - 1]
        return None if s == "guard-skipped" else s == "empty"


def closure(P: HPolytope, op: str) -> HPolytope:
    if op == "LS0":
        return ls0_closure(P)
    if op == "LS":
        return ls_closure(P)
    raise ValueError("op must be 'LS0' or 'LS'")


def iterate_emptiness(P: HPolytope, op: str, k: int) -> IterationReport:
    """Round r is decided by one step LP on the (r-1)-fold closure."""
    if op not in ("LS0", "LS"):
        raise ValueError("op must be 'LS0' or 'LS'")
    symmetric = op == "LS"
    rounds: list[str] = []
    wits: list = []
    cur = P
    for r in range(1, k + 1):
        try:
            step = _step(cur, symmetric)
        except ResourceLimit:
            rounds.extend(["guard-skipped"] * (k - r + 1))
            wits.extend([None] * (k - r + 1))
            break
        if not step.nonempty:
            rounds.extend(["empty"] * (k - r + 1))
            wits.extend([None] * (k - r + 1))
            break
        rounds.append("nonempty")
        wits.append(step.lift)
        if r < k:
            try:
                cur = closure(cur, op)
            except ResourceLimit:
                rounds.extend(["guard-skipped"] * (k - r))
                wits.extend([None] * (k - r))
                break
    return IterationReport(op, tuple(rounds), tuple(wits))


@dataclass(frozen=True)
class FacePoints:
    ok: bool
    points: dict[tuple[int, ...], tuple[Fraction, ...]]
    reason: str = ""


def d_implies_a_points(P: HPolytope, k: int) -> FacePoints:
    """Constructive passage from a nonempty LS_0^k(P) to points of P on every
    canonical k-face.

    Assumes (caller-certified) that a (k+1)-transitive group leaves P
    invariant: the averaging steps use the closed-form stabilizer average.
    """
    closures = [P]
    for _ in range(max(k - 1, 0)):
        closures.append(ls0_closure(closures[-1]))
    if k == 0:
        out = is_feasible(P)
        if not out.feasible:
            return FacePoints(False, {}, "P is empty")
        x = tuple(reynolds_stabilized(out.point, (), 0))
        return FacePoints(True, {(): x})
    step = ls0_step_nonempty(closures[k - 1])
    if not step.nonempty:
        return FacePoints(False, {}, f"LS_0^{k}(P) is empty")
    x = tuple(reynolds_stabilized(step.x, (), 0))
    current = {(): x}
    for j in range(1, k + 1):
        Qj = closures[k - j]
        nxt = {}
        for q, pt in current.items():
            if not 0 < pt[j - 1] < 1:
                return FacePoints(False, {}, f"coordinate {j} is integral at {pt}; P is not integer-empty")
            L = lift_at(Qj, pt)
            if L is None:
                raise InternalConsistencyError(f"averaged point {pt} lost its lifting matrix")
            col = L.column(j)
            one = [v / col[0] for v in col[1:]]
            zero = [(L.Y[r][0] - L.Y[r][j]) / (1 - col[0]) for r in range(1, P.n + 1)]
            for bit, p in ((1, one), (0, zero)):
                avg = tuple(reynolds_stabilized(p, range(1, j + 1), k))
                if not Qj.contains(avg) or avg[j - 1] != bit or list(avg[: j - 1]) != list(q):
                    raise InternalConsistencyError(f"split point for q={q + (bit,)} fails its checks")
                nxt[q + (bit,)] = avg
        current = nxt
    return FacePoints(True, current)
