"""Exact rational linear programming over systems ``a . x >= b`` with free x.

The solver runs a two-phase primal simplex with Bland's rule on the dual
standard form

    max b.u   s.t.   A^T u = c,  u >= 0,

so the tableau has one row per primal variable and one column per primal
inequality.  Everything the caller sees is read back from that tableau:

* dual optimal  -> primal optimum x from the reduced costs of the artificial
  columns (the simplex multipliers), plus the dual vector u itself;
* dual unbounded -> the improving ray u is a Farkas certificate
  (u >= 0, u^T A = 0, u^T b > 0) for the primal system;
* dual infeasible -> the primal is unbounded or infeasible, told apart by a
  second run with c = 0.

Every witness, Farkas vector and dual vector is re-verified in exact
arithmetic before it is returned.  Internally the tableau holds gmpy2.mpq
values; the public API speaks fractions.Fraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

from .config import ResourceLimit, limits
from .errors import InternalConsistencyError

Row = Union[Sequence, Mapping[int, object]]
ZERO = mpq(0)


@dataclass(frozen=True)
class LPOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration-limit"
    point: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status in ("optimal", "unbounded")


def _to_mpq(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    if isinstance(v, float):
        raise TypeError("floats are not accepted by the exact solver")
    return mpq(v)


def _to_fraction(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _sparse(a: Row, n: int) -> dict[int, mpq]:
    if isinstance(a, Mapping):
        items = a.items()
    else:
        if len(a) != n:
            raise ValueError(f"row has {len(a)} coefficients, expected {n}")
        items = enumerate(a)
    out = {}
    for j, v in items:
        if not 0 <= j < n:
            raise ValueError(f"column {j} out of range")
        q = _to_mpq(v)
        if q:
            out[j] = q
    return out


class _Tableau:
    """Dense simplex tableau for  min cost.u  s.t.  M u = rhs, u >= 0,  M with rhs >= 0."""

    def __init__(self, cols: list[dict[int, mpq]], rhs: list[mpq], nrows: int):
        self.m = len(cols)  # real columns
        self.nrows = nrows
        width = self.m + nrows
        self.T = [[ZERO] * width for _ in range(nrows)]
        for i, col in enumerate(cols):
            for j, v in col.items():
                self.T[j][i] = v
        self.sign = []
        self.rhs = []
        for j in range(nrows):
            if rhs[j] < 0:
                self.T[j] = [-v for v in self.T[j]]
                self.sign.append(-1)
                self.rhs.append(-rhs[j])
            else:
                self.sign.append(1)
                self.rhs.append(rhs[j])
            self.T[j][self.m + j] = mpq(1)
        self.basis = [self.m + j for j in range(nrows)]
        self.barred: set[int] = set()
        self.d: list[mpq] = []
        self.obj = ZERO  # current value of  -cost_B . rhs  bookkeeping: objective = -obj
        self.pivots = 0

    def set_cost(self, cost: list[mpq]) -> None:
        d = list(cost)
        obj = ZERO
        for r, bcol in enumerate(self.basis):
            cb = cost[bcol]
            if cb:
                row = self.T[r]
                for i, v in enumerate(row):
                    if v:
                        d[i] -= cb * v
                obj += cb * self.rhs[r]
        self.d = d
        self.obj = obj

    def pivot(self, p: int, q: int) -> None:
        row = self.T[p]
        piv = row[q]
        nz = [i for i, v in enumerate(row) if v]
        if piv != 1:
            inv = 1 / piv
            for i in nz:
                row[i] *= inv
            self.rhs[p] *= inv
        rp = self.rhs[p]
        for r in range(self.nrows):
            if r == p:
                continue
            tr = self.T[r]
            f = tr[q]
            if f:
                for i in nz:
                    tr[i] -= f * row[i]
                self.rhs[r] -= f * rp
        f = self.d[q]
        if f:
            d = self.d
            for i in nz:
                d[i] -= f * row[i]
            self.obj += f * rp
        self.basis[p] = q
        self.pivots += 1

    def run(self, cap: int, stop_at_zero: bool = False) -> tuple[str, int | None]:
        """Bland's rule. Returns ("optimal"|"unbounded"|"iteration-limit", entering col on unbounded)."""
        while True:
            if stop_at_zero and self.obj == 0:
                return "optimal", None
            q = None
            for i, v in enumerate(self.d):
                if v < 0 and i not in self.barred:
                    q = i
                    break
            if q is None:
                return "optimal", None
            if self.pivots >= cap:
                return "iteration-limit", None
            best = None
            best_ratio = None
            for r in range(self.nrows):
                t = self.T[r][q]
                if t > 0:
                    ratio = self.rhs[r] / t
                    if (
                        best is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[best])
                    ):
                        best, best_ratio = r, ratio
            if best is None:
                return "unbounded", q
            self.pivot(best, q)


def _verify_point(n, rows, x):
    for a, b in rows:
        if sum((v * x[j] for j, v in a.items()), ZERO) < b:
            raise InternalConsistencyError("LP witness violates a row")


def _verify_farkas(n, rows, u):
    if any(v < 0 for v in u):
        raise InternalConsistencyError("Farkas multipliers must be non-negative")
    comb = [ZERO] * n
    rhs = ZERO
    for ui, (a, b) in zip(u, rows):
        if ui:
            for j, v in a.items():
                comb[j] += ui * v
            rhs += ui * b
    if any(comb) or not rhs > 0:
        raise InternalConsistencyError("Farkas certificate does not verify")


def _verify_dual(n, rows, u, c, value):
    if any(v < 0 for v in u):
        raise InternalConsistencyError("dual multipliers must be non-negative")
    comb = [ZERO] * n
    bu = ZERO
    for ui, (a, b) in zip(u, rows):
        if ui:
            for j, v in a.items():
                comb[j] += ui * v
            bu += ui * b
    if comb != c or bu != value:
        raise InternalConsistencyError("dual certificate does not verify")


def solve(
    n: int,
    rows: Iterable[tuple[Row, object]],
    c: Sequence | None = None,
    sense: str = "min",
    pivot_cap: int | None = None,
) -> LPOutcome:
    """Optimize c.x over {x in Q^n : a.x >= b for every (a, b)}; c = None tests feasibility."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    cap = limits().pivots if pivot_cap is None else pivot_cap
    srows = [(_sparse(a, n), _to_mpq(b)) for a, b in rows]
    if c is None:
        cvec = [ZERO] * n
    else:
        if len(c) != n:
            raise ValueError("objective has the wrong length")
        cvec = [_to_mpq(v) for v in c]
    flip = sense == "max"
    if flip:
        cvec = [-v for v in cvec]
    out = _solve_min(n, srows, cvec, cap)
    if flip and out.value is not None:
        out = LPOutcome(out.status, out.point, -out.value, out.farkas, out.dual, out.pivots)
    return out


def _solve_min(n, srows, cvec, cap) -> LPOutcome:
    m = len(srows)
    tab = _Tableau([a for a, _ in srows], list(cvec), n)
    # phase 1: minimise the sum of artificials
    tab.set_cost([ZERO] * m + [mpq(1)] * n)
    status, _ = tab.run(cap, stop_at_zero=True)
    if status == "iteration-limit":
        return LPOutcome("iteration-limit", pivots=tab.pivots)
    if tab.obj != 0:
        # A^T u = c has no non-negative solution: primal is unbounded or infeasible.
        if any(cvec):
            probe = _solve_min(n, srows, [ZERO] * n, cap)
            if probe.status == "optimal":
                return LPOutcome("unbounded", point=probe.point, pivots=tab.pivots + probe.pivots)
            return LPOutcome(probe.status, farkas=probe.farkas, pivots=tab.pivots + probe.pivots)
        raise InternalConsistencyError("phase 1 failed on a homogeneous dual system")
    # drive artificial columns out of the basis where possible
    for r in range(n):
        if tab.basis[r] >= m:
            row = tab.T[r]
            q = next((i for i in range(m) if row[i]), None)
            if q is not None:
                tab.pivot(r, q)
    tab.barred = set(range(m, m + n))
    # phase 2: minimise -b.u
    tab.set_cost([-b for _, b in srows] + [ZERO] * n)
    status, q = tab.run(cap)
    if status == "iteration-limit":
        return LPOutcome("iteration-limit", pivots=tab.pivots)
    if status == "unbounded":
        u = [ZERO] * m
        u[q] = mpq(1)
        for r, bcol in enumerate(tab.basis):
            if bcol < m:
                u[bcol] = -tab.T[r][q]
        _verify_farkas(n, srows, u)
        return LPOutcome(
            "infeasible", farkas=tuple(_to_fraction(v) for v in u), pivots=tab.pivots
        )
    x = [tab.sign[j] * tab.d[m + j] for j in range(n)]
    _verify_point(n, srows, x)
    u = [ZERO] * m
    for r, bcol in enumerate(tab.basis):
        if bcol < m:
            u[bcol] = tab.rhs[r]
    value = sum((ci * xi for ci, xi in zip(cvec, x)), ZERO)
    _verify_dual(n, srows, u, cvec, value)
    return LPOutcome(
        "optimal",
        point=tuple(_to_fraction(v) for v in x),
        value=_to_fraction(value),
        dual=tuple(_to_fraction(v) for v in u),
        pivots=tab.pivots,
    )


def feasible(P, pivot_cap: int | None = None) -> LPOutcome:
    """Feasibility of an object exposing ``n`` and ``rows`` (pairs (a, b))."""
    return solve(P.n, P.rows, None, pivot_cap=pivot_cap)


def optimize(P, c: Sequence, sense: str = "min", pivot_cap: int | None = None) -> LPOutcome:
    return solve(P.n, P.rows, c, sense, pivot_cap=pivot_cap)


def decided(out: LPOutcome) -> LPOutcome:
    """Pass a decided outcome through; turn a pivot-cap stop into a ResourceLimit."""
    if out.status == "iteration-limit":
        raise ResourceLimit("pivot-guard", f"simplex stopped after {out.pivots} pivots")
    return out
