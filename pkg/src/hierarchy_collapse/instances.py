"""Generators for the instance families used by the experiments and tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations, product
from typing import Sequence

from .exact_core import Q
from .perm_group import PermGroup, act_on_vector, elements, parse_group
from .polytope import HPolytope, VPolytope, hull


@dataclass(frozen=True)
class Instance:
    name: str
    polytope: HPolytope
    group: PermGroup
    objective: tuple[Fraction, ...] | None = None


def _ones(n: int) -> tuple[Fraction, ...]:
    return (Fraction(1),) * n


def parity(n: int) -> HPolytope:
    """{x in [0,1]^n : sum x = n/2} for odd n."""
    if n < 3 or n % 2 == 0:
        raise ValueError("parity polytope needs odd n >= 3")
    half = Fraction(n, 2)
    return HPolytope.from_rows(n, [(_ones(n), half), ((Fraction(-1),) * n, -half)])


def cropped_cube(n: int) -> HPolytope:
    """Cut every vertex of the cube: sum_{I} x + sum_{not I} (1 - x) >= 1/2 for all I."""
    if not 1 <= n <= 16:
        raise ValueError("cropped cube supports 1 <= n <= 16")
    rows = []
    for bits in product((0, 1), repeat=n):
        a = [Fraction(1) if b else Fraction(-1) for b in bits]
        rows.append((a, Fraction(1, 2) - (n - sum(bits))))
    return HPolytope.from_rows(n, rows)


def knapsack_cover(n: int) -> HPolytope:
    """sum x >= 1 + 1/(n-1) together with sum_{j != i} x_j >= 1 for every i."""
    if n < 3:
        raise ValueError("knapsack-cover instance needs n >= 3")
    rows = [(_ones(n), 1 + Fraction(1, n - 1))]
    for i in range(n):
        rows.append(([Fraction(0) if j == i else Fraction(1) for j in range(n)], Fraction(1)))
    return HPolytope.from_rows(n, rows)


def _digits(i: int, n: int) -> tuple[int, ...]:
    """Base-3 digits of i - 1, most significant first."""
    v = i - 1
    out = []
    for _ in range(n):
        out.append(v % 3)
        v //= 3
    return tuple(reversed(out))


def sts_triples(n: int) -> list[tuple[int, int, int]]:
    """Covering triples of the Steiner triple instance on 3^n points.

    Points 1..3^n are read as vectors of AG(n, 3) (digits of i - 1); the
    triples are the affine lines.  They are listed recursively: the lines
    inside each of the three blocks of size 3^(n-1), then the lines meeting
    the blocks at equal offsets, then the remaining cross-block lines in
    lexicographic order.
    """
    if not 1 <= n <= 3:
        raise ValueError("Steiner triple instances are generated for n in {1, 2, 3}")
    if n == 1:
        return [(1, 2, 3)]
    m = 3 ** (n - 1)
    inner = sts_triples(n - 1)
    rows = [tuple(v + blk * m for v in t) for blk in range(3) for t in inner]
    rows += [(i, i + m, i + 2 * m) for i in range(1, m + 1)]
    for i in range(1, m + 1):
        for j in range(m + 1, 2 * m + 1):
            for l in range(2 * m + 1, 3 * m + 1):
                u, v, w = (_digits(t, n)[1:] for t in (i, j, l))
                if len({u, v, w}) == 3 and all((a + b + c) % 3 == 0 for a, b, c in zip(u, v, w)):
                    rows.append((i, j, l))
    return rows


def sts(n: int) -> HPolytope:
    size = 3**n
    rows = []
    for t in sts_triples(n):
        rows.append(([Fraction(1) if i + 1 in t else Fraction(0) for i in range(size)], Fraction(1)))
    return HPolytope.from_rows(size, rows)


def sts_optimal_face(n: int = 2) -> HPolytope:
    """The Steiner instance cut down to the face sum x = 4 (the LP optimum is 3)."""
    if n != 2:
        raise ValueError("the optimal face is provided for n = 2 only")
    P = sts(2)
    return P.with_rows([(_ones(9), 4), ((Fraction(-1),) * 9, -4)])


def sts_group(n: int = 2) -> PermGroup:
    """Generators of AGL(2, 3) acting on the 9 points, shipped as a data file."""
    if n != 2:
        raise ValueError("automorphism generators are shipped for n = 2 only")
    text = resources.files("hierarchy_collapse.data").joinpath("sts2_agl23.grp").read_text()
    return parse_group(text)


def orbit_points(points: Sequence[Sequence], G: PermGroup) -> list[tuple[Fraction, ...]]:
    elems = elements(G)
    out: dict[tuple[Fraction, ...], None] = {}
    for p in points:
        p = [Q(v) for v in p]
        for g in elems:
            out[tuple(act_on_vector(g, p))] = None
    return list(out)


def orbit_hull(points: Sequence[Sequence], G: PermGroup) -> HPolytope:
    return hull(VPolytope(G.n, tuple(orbit_points(points, G))))


def three_point_example() -> HPolytope:
    """conv of all permutations of (0, 1/2, 1)."""
    return orbit_hull([(0, Fraction(1, 2), 1)], PermGroup.symmetric(3))


def cyclic_counterexample() -> HPolytope:
    """conv of the cyclic shifts of (1, 1/2, 0) and (1, 1, 1/10)."""
    return orbit_hull([(1, Fraction(1, 2), 0), (1, 1, Fraction(1, 10))], PermGroup.cyclic(3))


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    params: dict = field(default_factory=dict)

    def build(self) -> Instance:
        f = self.family.replace("-", "_")
        p = self.params
        if f == "parity":
            n = int(p["n"])
            return Instance(f"parity-{n}", parity(n), PermGroup.symmetric(n))
        if f == "cropped_cube":
            n = int(p["n"])
            return Instance(f"cropped-cube-{n}", cropped_cube(n), PermGroup.symmetric(n))
        if f == "knapsack_cover":
            n = int(p["n"])
            return Instance(f"knapsack-cover-{n}", knapsack_cover(n), PermGroup.symmetric(n), _ones(n))
        if f == "sts":
            n = int(p["n"])
            group = sts_group(n) if n == 2 else PermGroup.trivial(3**n)
            return Instance(f"sts-{n}", sts(n), group, _ones(3**n))
        if f == "sts_face":
            return Instance("sts-face-2", sts_optimal_face(2), sts_group(2), _ones(9))
        if f == "three_point":
            return Instance("three-point", three_point_example(), PermGroup.symmetric(3))
        if f == "cyclic_counterexample":
            return Instance("cyclic-counterexample", cyclic_counterexample(), PermGroup.cyclic(3))
        if f == "orbit_hull":
            G = p["group"]
            return Instance("orbit-hull", orbit_hull(p["points"], G), G)
        raise ValueError(f"unknown instance family {self.family!r}")


def library() -> list[Instance]:
    """Every instance small enough for the full battery of closure checks."""
    specs = [
        InstanceSpec("parity", {"n": 3}),
        InstanceSpec("parity", {"n": 5}),
        InstanceSpec("cropped_cube", {"n": 2}),
        InstanceSpec("cropped_cube", {"n": 3}),
        InstanceSpec("knapsack_cover", {"n": 4}),
        InstanceSpec("three_point"),
        InstanceSpec("cyclic_counterexample"),
        InstanceSpec("sts_face"),
    ]
    return [s.build() for s in specs]
