"""The Sherali-Adams lift M^k(P), its emptiness test, conditional points and
the local-consistency characterization of lifted vectors.

Lifted vectors live on the subsets I of [n] with |I| <= min(k+1, n); the
subsets are ordered graded-colexicographically (by size, then colex).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import lp_exact
from .exact_core import Q, format_rational, parse_rational
from .perm_group import Permutation
from .polytope import HPolytope

Subset = frozenset


def all_subsets(s: Iterable[int]) -> Iterator[frozenset[int]]:
    items = sorted(s)
    for r in range(len(items) + 1):
        for c in combinations(items, r):
            yield frozenset(c)


class SubsetIndexer:
    """Rank/unrank of subsets of [n] with at most ``cap`` elements."""

    def __init__(self, n: int, cap: int):
        if not 0 <= cap <= n:
            raise ValueError(f"subset cap must lie in 0..{n}")
        self.n = n
        self.cap = cap
        self.offsets = [0]
        for s in range(cap + 1):
            self.offsets.append(self.offsets[-1] + comb(n, s))
        self.size = self.offsets[-1]
        self._index: dict[frozenset[int], int] = {}
        self._subsets: list[frozenset[int]] = []
        for i in range(self.size):
            s = self._unrank(i)
            self._subsets.append(s)
            self._index[s] = i

    def rank(self, subset: Iterable[int]) -> int:
        members = sorted(subset)
        if len(members) > self.cap or any(not 1 <= v <= self.n for v in members):
            raise KeyError(f"subset {members} not indexed (n={self.n}, cap={self.cap})")
        return self.offsets[len(members)] + sum(comb(v - 1, i + 1) for i, v in enumerate(members))

    def _unrank(self, idx: int) -> frozenset[int]:
        s = next(t for t in range(self.cap + 1) if idx < self.offsets[t + 1])
        r = idx - self.offsets[s]
        members = []
        for i in range(s, 0, -1):
            c = i - 1
            while comb(c + 1, i) <= r:
                c += 1
            members.append(c + 1)
            r -= comb(c, i)
        return frozenset(members)

    def unrank(self, idx: int) -> frozenset[int]:
        return self._subsets[idx]

    def index(self, subset: frozenset[int]) -> int:
        return self._index[subset]

    def __contains__(self, subset) -> bool:
        return frozenset(subset) in self._index

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self._subsets)

    def __len__(self) -> int:
        return self.size


_INDEXERS: dict[tuple[int, int], SubsetIndexer] = {}


def indexer(n: int, cap: int) -> SubsetIndexer:
    key = (n, cap)
    if key not in _INDEXERS:
        _INDEXERS[key] = SubsetIndexer(n, cap)
    return _INDEXERS[key]


def lift_cap(n: int, k: int) -> int:
    return min(k + 1, n)


@dataclass(frozen=True)
class SAVector:
    """A rational vector indexed by the subsets |I| <= min(k+1, n)."""

    n: int
    k: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        idx = indexer(self.n, lift_cap(self.n, self.k))
        vals = tuple(Q(v) for v in self.values)
        if len(vals) != idx.size:
            raise ValueError(f"expected {idx.size} entries, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @property
    def indexer(self) -> SubsetIndexer:
        return indexer(self.n, lift_cap(self.n, self.k))

    def __getitem__(self, subset: Iterable[int]) -> Fraction:
        return self.values[self.indexer.index(frozenset(subset))]

    def items(self) -> Iterator[tuple[frozenset[int], Fraction]]:
        return zip(self.indexer, self.values)

    def level1(self) -> tuple[Fraction, ...]:
        return tuple(self[{i}] for i in range(1, self.n + 1))

    @classmethod
    def from_function(cls, n: int, k: int, f) -> SAVector:
        return cls(n, k, tuple(f(s) for s in indexer(n, lift_cap(n, k))))

    @classmethod
    def from_levels(cls, n: int, k: int, levels: Sequence) -> SAVector:
        """Level-symmetric vector: y_I = levels[|I|]."""
        return cls.from_function(n, k, lambda s: levels[len(s)])

    @classmethod
    def lift_point(cls, x: Sequence, k: int) -> SAVector:
        """y_I = prod_{i in I} x_i, the lift of a point."""
        x = [Q(v) for v in x]

        def prod(s):
            out = Fraction(1)
            for i in s:
                out *= x[i - 1]
            return out

        return cls.from_function(len(x), k, prod)

    def truncate(self, k: int) -> SAVector:
        return SAVector.from_function(self.n, k, lambda s: self[s])


def permute_savector(pi: Permutation, y: SAVector) -> SAVector:
    """(pi y)_S = y_{pi^-1(S)}."""
    inv = pi.inverse()
    return SAVector.from_function(y.n, y.k, lambda s: y[frozenset(inv(i) for i in s)])


@dataclass(frozen=True)
class Partition2:
    J0: frozenset[int]
    J1: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "J0", frozenset(self.J0))
        object.__setattr__(self, "J1", frozenset(self.J1))
        if self.J0 & self.J1:
            raise ValueError("J0 and J1 must be disjoint")

    @property
    def S(self) -> frozenset[int]:
        return self.J0 | self.J1


def partitions(S: Iterable[int]) -> Iterator[Partition2]:
    """All 2-partitions (J0, J1) of S, J1 running through subsets in graded order."""
    S = frozenset(S)
    for J1 in all_subsets(S):
        yield Partition2(S - J1, J1)


def linearize_product(J0, J1, extra=frozenset()) -> dict[frozenset[int], int]:
    """Multilinear expansion of prod_{J1 u extra} x * prod_{J0} (1 - x) with x_I -> y_I."""
    J0, J1, extra = frozenset(J0), frozenset(J1), frozenset(extra)
    if J0 & (J1 | extra):
        raise ValueError("J0 must be disjoint from J1 and the extra factors")
    base = J1 | extra
    return {base | H: (-1) ** len(H) for H in all_subsets(J0)}


@dataclass
class LiftedSystem:
    """Rows sum_I coef_I y_I >= rhs over the subset index space, with provenance tags."""

    n: int  # number of lifted variables
    base_n: int
    k: int
    rows: list[tuple[dict[int, Fraction], Fraction]] = field(default_factory=list)
    tags: list[tuple] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.tags:
            out[t[0]] = out.get(t[0], 0) + 1
        return out

    def first_violation(self, values: Sequence[Fraction], homogeneous_only: bool = False) -> tuple | None:
        for (a, b), tag in zip(self.rows, self.tags):
            if homogeneous_only and tag[0] == "SA0":
                continue
            if sum((v * values[i] for i, v in a.items()), Fraction(0)) < b:
                return tag
        return None

    def lp_rows(self) -> list[tuple[dict[int, Fraction], Fraction]]:
        """Rows with trivial and repeated constraints removed."""
        seen = set()
        out = []
        for a, b in self.rows:
            if not a:
                if b > 0:
                    out.append((a, b))
                continue
            key = (tuple(sorted(a.items())), b)
            if key not in seen:
                seen.add(key)
                out.append((a, b))
        return out


def build_Mk(P: HPolytope, k: int) -> LiftedSystem:
    n = P.n
    if not 0 <= k <= n:
        raise ValueError(f"level must lie in 0..{n}")
    idx = indexer(n, lift_cap(n, k))
    sysm = LiftedSystem(idx.size, n, k)
    empty = idx.index(frozenset())

    def add(expr: dict[frozenset[int], Fraction], rhs, tag):
        row = {}
        for s, v in expr.items():
            if v:
                j = idx.index(s)
                row[j] = row.get(j, 0) + v
        sysm.rows.append(({j: Fraction(v) for j, v in row.items() if v}, Fraction(rhs)))
        sysm.tags.append(tag)

    add({frozenset(): 1}, 1, ("SA0", "y_empty >= 1"))
    add({frozenset(): -1}, -1, ("SA0", "y_empty <= 1"))
    assert sysm.rows[0][0] == {empty: 1}
    for S in combinations(range(1, n + 1), lift_cap(n, k)):
        for part in partitions(S):
            add(linearize_product(part.J0, part.J1), 0, ("SA1", tuple(sorted(part.J0)), tuple(sorted(part.J1))))
    for ri, (a, b) in enumerate(P.rows):
        for S in combinations(range(1, n + 1), k):
            rest = [j for j in range(1, n + 1) if j not in S]
            for part in partitions(S):
                expr: dict[frozenset[int], Fraction] = {}
                lead = sum((a[j - 1] for j in part.J1), Fraction(0)) - b
                if lead:
                    for s, v in linearize_product(part.J0, part.J1).items():
                        expr[s] = expr.get(s, 0) + lead * v
                for j in rest:
                    if a[j - 1]:
                        for s, v in linearize_product(part.J0, part.J1, {j}).items():
                            expr[s] = expr.get(s, 0) + a[j - 1] * v
                add(expr, 0, ("SA2", ri, tuple(sorted(part.J0)), tuple(sorted(part.J1))))
    return sysm


@dataclass(frozen=True)
class SAResult:
    empty: bool | None  # None: the pivot cap stopped the solver
    witness: SAVector | None
    farkas: tuple[Fraction, ...] | None
    outcome: lp_exact.LPOutcome

    @property
    def status(self) -> str:
        return self.outcome.status


def sa_emptiness(P: HPolytope, k: int) -> SAResult:
    sysm = build_Mk(P, k)
    rows = sysm.lp_rows()
    out = lp_exact.solve(sysm.n, rows)
    if out.status == "optimal":
        y = SAVector(P.n, k, out.point)
        viol = sysm.first_violation(y.values)
        if viol is not None:
            from .errors import InternalConsistencyError

            raise InternalConsistencyError(f"SA witness violates {viol}")
        return SAResult(False, y, None, out)
    if out.status == "infeasible":
        return SAResult(True, None, out.farkas, out)
    return SAResult(None, None, None, out)


def conditional_point(y: SAVector, part: Partition2) -> tuple[Fraction, SAVector]:
    """Condition y on x_{J1} = 1, x_{J0} = 0.

    Returns the weight y^{J0,J1}_empty and the conditional vector, normalized
    by that weight when it is positive and left unnormalized otherwise.
    """
    d = len(part.S)
    if d > y.k:
        raise ValueError("conditioning set larger than the lift level")
    k2 = y.k - d
    raw = {}
    for I in indexer(y.n, lift_cap(y.n, k2)):
        raw[I] = sum(
            (Fraction((-1) ** len(H)) * y[part.J1 | I | H] for H in all_subsets(part.J0)),
            Fraction(0),
        )
    w = raw[frozenset()]
    if w > 0:
        vals = [raw[I] / w for I in indexer(y.n, lift_cap(y.n, k2))]
    else:
        vals = [raw[I] for I in indexer(y.n, lift_cap(y.n, k2))]
    return w, SAVector(y.n, k2, tuple(vals))


@dataclass(frozen=True)
class ConsistencyResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_local_consistency(y: SAVector, P: HPolytope, k: int, d: int) -> ConsistencyResult:
    """Decompose y over every conditioning set of size d and test each piece."""
    if y.k != k or y.n != P.n:
        raise ValueError("vector shape does not match (P, k)")
    if not 0 <= d <= k:
        raise ValueError("conditioning size must lie in 0..k")
    sub = build_Mk(P, k - d)
    for S in combinations(range(1, P.n + 1), d):
        total = Fraction(0)
        recon: dict[frozenset[int], Fraction] = {}
        for part in partitions(S):
            w, z = conditional_point(y, part)
            if w < 0:
                return ConsistencyResult(False, f"negative weight {w} for J0={sorted(part.J0)}, J1={sorted(part.J1)}")
            total += w
            if w > 0:
                viol = sub.first_violation(z.values)
                if viol is not None:
                    return ConsistencyResult(False, f"condition (1) fails for J1={sorted(part.J1)}: {viol}")
                for j in part.J1:
                    if z[{j}] != 1:
                        return ConsistencyResult(False, f"z_{j} != 1 on J1")
                for j in part.J0:
                    if z[{j}] != 0:
                        return ConsistencyResult(False, f"z_{j} != 0 on J0")
                scaled = [w * v for v in z.values]
            else:
                if any(z.values):
                    viol = sub.first_violation(z.values, homogeneous_only=True)
                    if viol is not None:
                        return ConsistencyResult(False, f"zero-weight piece violates {viol}")
                scaled = list(z.values)
            for I, v in zip(z.indexer, scaled):
                recon[I] = recon.get(I, Fraction(0)) + v
        if total != 1:
            return ConsistencyResult(False, f"weights sum to {total} for S={list(S)}")
        for I, v in recon.items():
            if v != y[I]:
                return ConsistencyResult(False, f"decomposition does not reproduce y_{sorted(I)}")
    return ConsistencyResult(True)


# ---------------------------------------------------------------- file format


def format_savector(y: SAVector) -> str:
    lines = [f"Y {y.n} {y.k}"]
    for s, v in y.items():
        lines.append(" ".join([str(len(s)), *map(str, sorted(s)), format_rational(v)]))
    return "\n".join(lines) + "\n"


def parse_savector(text: str) -> SAVector:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0][0] != "Y" or len(lines[0]) != 3:
        raise ValueError("SA vector file must start with 'Y n k'")
    n, k = int(lines[0][1]), int(lines[0][2])
    idx = indexer(n, lift_cap(n, k))
    vals: dict[frozenset[int], Fraction] = {}
    for toks in lines[1:]:
        size = int(toks[0])
        if len(toks) != size + 2:
            raise ValueError(f"malformed subset line {' '.join(toks)!r}")
        s = frozenset(int(t) for t in toks[1 : 1 + size])
        if s not in idx:
            raise ValueError(f"subset {sorted(s)} outside the index space")
        vals[s] = parse_rational(toks[-1])
    if len(vals) != idx.size:
        raise ValueError(f"expected {idx.size} subset lines, found {len(vals)}")
    return SAVector(n, k, tuple(vals[s] for s in idx))


def read_savector(path: str | Path) -> SAVector:
    return parse_savector(Path(path).read_text())


# ---------------------------------------------------------------- the shadow SA^k(P)


def _level1_expr(n: int, k: int, a: Sequence) -> dict[int, Fraction]:
    idx = indexer(n, lift_cap(n, k))
    return {idx.index(frozenset({i + 1})): Q(v) for i, v in enumerate(a) if Q(v)}


def shadow_contains(P: HPolytope, k: int, x: Sequence) -> bool:
    """Whether x lies in SA^k(P), the projection of M^k(P) onto the singletons."""
    sysm = build_Mk(P, k)
    rows = sysm.lp_rows()
    idx = indexer(P.n, lift_cap(P.n, k))
    for i, v in enumerate(x, start=1):
        j = idx.index(frozenset({i}))
        rows.append(({j: Fraction(1)}, Q(v)))
        rows.append(({j: Fraction(-1)}, -Q(v)))
    return lp_exact.decided(lp_exact.solve(sysm.n, rows)).feasible


def shadow_implies(P: HPolytope, k: int, a: Sequence, b) -> bool:
    """Whether a.x >= b holds on SA^k(P) (vacuous when it is empty)."""
    sysm = build_Mk(P, k)
    expr = _level1_expr(P.n, k, a)
    c = [Fraction(0)] * sysm.n
    for j, v in expr.items():
        c[j] = v
    out = lp_exact.decided(lp_exact.solve(sysm.n, sysm.lp_rows(), c, "min"))
    if out.status == "infeasible":
        return True
    return out.status == "optimal" and out.value >= Q(b)
