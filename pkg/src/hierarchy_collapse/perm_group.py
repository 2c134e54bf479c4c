"""Permutations of [n], generated groups, and the actions used throughout.

Points of [n] are 1-based in the public API; ``Permutation.images[i]`` holds
pi(i + 1).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import perm
from pathlib import Path
from typing import Iterable, Sequence

from .config import ResourceLimit, limits


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        img = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, start=1))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """The composition a o b, i.e. i -> a(b(i))."""
    if a.n != b.n:
        raise ValueError("compose: permutations act on different sets")
    return Permutation(tuple(a.images[v - 1] for v in b.images))


def act_on_vector(pi: Permutation, x: Sequence) -> list:
    """(pi x)_i = x_{pi^-1(i)}."""
    if len(x) != pi.n:
        raise ValueError("act_on_vector: length mismatch")
    out = [None] * pi.n
    for i, v in enumerate(pi.images):
        out[v - 1] = x[i]
    return out


def act_on_subset(pi: Permutation, s: Iterable[int]) -> frozenset[int]:
    return frozenset(pi(i) for i in s)


@dataclass(frozen=True)
class PermGroup:
    n: int
    generators: tuple[Permutation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        gens = tuple(self.generators)
        if any(g.n != self.n for g in gens):
            raise ValueError("all generators must act on the same n")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def symmetric(cls, n: int) -> PermGroup:
        if n == 1:
            return cls(1, ())
        gens = [Permutation.from_cycles(n, (1, 2))]
        if n > 2:
            gens.append(Permutation.from_cycles(n, tuple(range(1, n + 1))))
        return cls(n, tuple(gens))

    @classmethod
    def cyclic(cls, n: int) -> PermGroup:
        if n == 1:
            return cls(1, ())
        return cls(n, (Permutation.from_cycles(n, tuple(range(1, n + 1))),))

    @classmethod
    def trivial(cls, n: int) -> PermGroup:
        return cls(n, ())


def tuple_orbit_size(group: PermGroup, k: int, cap: int | None = None) -> int:
    cap = limits().tuple_orbit if cap is None else cap
    start = tuple(range(1, k + 1))
    seen = {start}
    queue = deque([start])
    gens = [g.images for g in group.generators]
    while queue:
        t = queue.popleft()
        for img in gens:
            u = tuple(img[v - 1] for v in t)
            if u not in seen:
                seen.add(u)
                if len(seen) > cap:
                    raise ResourceLimit("undecided-resource-limit", f"tuple orbit exceeds {cap}")
                queue.append(u)
    return len(seen)


def is_k_transitive(group: PermGroup, k: int, cap: int | None = None) -> bool:
    """Whether the group maps every ordered k-tuple of distinct points to every other."""
    if not 1 <= k <= group.n:
        raise ValueError(f"degree must lie in 1..{group.n}")
    return tuple_orbit_size(group, k, cap) == perm(group.n, k)


def transitivity_degree(group: PermGroup, upto: int | None = None) -> int:
    """Largest k (capped at ``upto``) for which the group is k-transitive; 0 if not transitive."""
    top = group.n if upto is None else min(upto, group.n)
    best = 0
    for k in range(1, top + 1):
        if not is_k_transitive(group, k):
            break
        best = k
    return best


def elements(group: PermGroup, cap: int | None = None) -> list[Permutation]:
    cap = limits().group_order if cap is None else cap
    ident = Permutation.identity(group.n)
    seen = {ident.images: ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in group.generators:
            q = compose(g, p)
            if q.images not in seen:
                seen[q.images] = q
                if len(seen) > cap:
                    raise ResourceLimit("group-too-large", f"more than {cap} elements")
                queue.append(q)
    return list(seen.values())


def reynolds_full(x: Sequence, group: PermGroup) -> list[Fraction]:
    elems = elements(group)
    total = [Fraction(0)] * group.n
    for p in elems:
        for i, v in enumerate(act_on_vector(p, list(x))):
            total[i] += v
    return [t / len(elems) for t in total]


def reynolds_stabilized(x: Sequence, s: Iterable[int], k: int) -> list[Fraction]:
    """Average of x over the pointwise stabilizer of S, in closed form.

    Valid when the acting group is (k+1)-transitive and |S| <= k: coordinates
    in S are kept and every other coordinate becomes the mean of the others.
    """
    s = frozenset(s)
    if len(s) > k:
        raise ValueError("|S| exceeds the certified transitivity level")
    n = len(x)
    rest = [i for i in range(1, n + 1) if i not in s]
    if not rest:
        return [Fraction(v) for v in x]
    mean = sum((Fraction(x[i - 1]) for i in rest), Fraction(0)) / len(rest)
    return [Fraction(x[i - 1]) if i in s else mean for i in range(1, n + 1)]


def stabilizer_elements(group: PermGroup, s: Iterable[int]) -> list[Permutation]:
    s = frozenset(s)
    return [p for p in elements(group) if all(p(i) == i for i in s)]


def read_group(path: str | Path) -> PermGroup:
    return parse_group(Path(path).read_text())


def parse_group(text: str) -> PermGroup:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0][0] != "G" or len(lines[0]) != 3:
        raise ValueError("group file must start with 'G n g'")
    n, g = int(lines[0][1]), int(lines[0][2])
    body = lines[1:]
    if len(body) != g:
        raise ValueError(f"expected {g} generator lines, found {len(body)}")
    gens = []
    for toks in body:
        if len(toks) != n:
            raise ValueError(f"generator line has {len(toks)} entries, expected {n}")
        gens.append(Permutation(tuple(int(t) for t in toks)))
    return PermGroup(n, tuple(gens))


def format_group(group: PermGroup) -> str:
    lines = [f"G {group.n} {len(group.generators)}"]
    lines += [" ".join(str(v) for v in g.images) for g in group.generators]
    return "\n".join(lines) + "\n"
