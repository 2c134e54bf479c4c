from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import unit
from hierarchy_collapse.instances import (
    cropped_cube,
    cyclic_counterexample,
    knapsack_cover,
    library,
    parity,
    sts,
    three_point_example,
)
from hierarchy_collapse.polytope import HPolytope, integer_points
from hierarchy_collapse.sa_hierarchy import (
    Partition2,
    SAVector,
    SubsetIndexer,
    build_Mk,
    check_local_consistency,
    conditional_point,
    format_savector,
    linearize_product,
    parse_savector,
    partitions,
    permute_savector,
    sa_emptiness,
    shadow_contains,
    shadow_implies,
)

h, q, e = Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)
fs = frozenset
YBAR = SAVector.from_levels(3, 1, [1, h, e])


def test_indexer_order_and_inverse():
    idx = SubsetIndexer(4, 2)
    order = list(idx)
    assert order[0] == fs()
    assert order[1:5] == [fs({i}) for i in range(1, 5)]
    assert order[5:] == [fs(s) for s in ({1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4})]
    for i in range(idx.size):
        assert idx.rank(idx.unrank(i)) == i
    assert idx.size == 11


def test_linearize_examples():
    assert linearize_product({2}, {1}) == {fs({1}): 1, fs({1, 2}): -1}
    assert linearize_product((), {1, 3}) == {fs({1, 3}): 1}
    assert linearize_product({2}, {1}, {3}) == {fs({1, 3}): 1, fs({1, 2, 3}): -1}
    with pytest.raises(ValueError):
        linearize_product({1}, {1})


def lifted(x, n, cap):
    return {fs(s): Fraction(all(x[i - 1] for i in s)) for r in range(cap + 1) for s in combinations(range(1, n + 1), r)}


@pytest.mark.parametrize("P,k", [(parity(3), 1), (cropped_cube(3), 2), (knapsack_cover(4), 2), (cyclic_counterexample(), 1)])
def test_rows_match_polynomial_products(P, k):
    """Each SA-2 row, read as a linear form in y, equals the product polynomial
    (a.x - b) prod_{J1} x prod_{J0} (1 - x) on every 0/1 point; since lifted
    0/1 points span the lifted space this pins the row exactly."""
    sysm = build_Mk(P, k)
    from hierarchy_collapse.sa_hierarchy import indexer, lift_cap

    idx = indexer(P.n, lift_cap(P.n, k))
    for (row, rhs), tag in zip(sysm.rows, sysm.tags):
        if tag[0] != "SA2":
            continue
        _, ri, J0, J1 = tag
        a, b = P.rows[ri]
        for x in product((0, 1), repeat=P.n):
            lift = lifted(x, P.n, idx.cap)
            val = sum((c * lift[idx.unrank(j)] for j, c in row.items()), Fraction(0))
            poly = (sum(ai * xi for ai, xi in zip(a, x)) - b)
            poly *= all(x[j - 1] for j in J1) and all(not x[j - 1] for j in J0)
            assert val == poly
            assert rhs == 0


def test_row_counts_parity3():
    counts = build_Mk(parity(3), 1).counts()
    assert counts["SA0"] == 2 and counts["SA1"] == 12
    assert counts["SA2"] == len(parity(3).rows) * 3 * 2
    assert build_Mk(parity(3), 1).n == 7


def test_level_zero_reproduces_rows():
    sysm = build_Mk(HPolytope.cube(3), 0)
    assert sysm.n == 4
    sa2 = [r for r, t in zip(sysm.rows, sysm.tags) if t[0] == "SA2"]
    assert len(sa2) == 6


def test_level_out_of_range():
    with pytest.raises(ValueError):
        build_Mk(parity(3), 4)


def test_known_witness_and_emptiness_examples():
    assert build_Mk(parity(3), 1).first_violation(YBAR.values) is None
    assert not sa_emptiness(parity(3), 1).empty
    assert sa_emptiness(parity(3), 2).empty
    res = sa_emptiness(cyclic_counterexample(), 1)
    assert res.empty and res.farkas is not None


def test_farkas_certificate_checks_out():
    P = cyclic_counterexample()
    sysm = build_Mk(P, 1)
    rows = sysm.lp_rows()
    u = sa_emptiness(P, 1).farkas
    assert len(u) == len(rows) and all(v >= 0 for v in u)
    comb = [Fraction(0)] * sysm.n
    for ui, (a, _) in zip(u, rows):
        for j, v in a.items():
            comb[j] += ui * v
    assert not any(comb)
    assert sum(ui * b for ui, (_, b) in zip(u, rows)) > 0


def test_conditional_points():
    w, z = conditional_point(YBAR, Partition2((), {1}))
    assert w == h and z.level1() == (1, q, q)
    w, z = conditional_point(YBAR, Partition2({1}, ()))
    assert w == h and z.level1() == (0, Fraction(3, 4), Fraction(3, 4))
    assert z[fs()] == 1 and z.k == 0


def test_local_consistency_examples():
    assert check_local_consistency(YBAR, parity(3), 1, 1)
    assert check_local_consistency(YBAR, parity(3), 1, 0)
    ones = SAVector.from_function(3, 1, lambda s: Fraction(1))
    assert not check_local_consistency(ones, HPolytope.empty(3), 1, 1)
    bad = SAVector.from_levels(3, 1, [1, h, Fraction(1, 3)])
    assert not check_local_consistency(bad, parity(3), 1, 1)


def random_y(rng, n, k):
    """A point of the lifted cube (a mix of lifted 0/1 points), sometimes nudged off it."""
    pts = list(product((0, 1), repeat=n))
    w = [Fraction(rng.randint(0, 3)) for _ in pts]
    if not any(w):
        w[0] = Fraction(1)
    tot = sum(w)
    y = SAVector.from_function(n, k, lambda s: sum((wi for wi, x in zip(w, pts) if all(x[i - 1] for i in s)), Fraction(0)) / tot)
    if rng.random() < 0.5:
        vals = list(y.values)
        j = rng.randrange(1, len(vals))
        vals[j] += Fraction(rng.choice([-1, 1]), rng.randint(2, 12))
        y = SAVector(n, k, tuple(vals))
    return y


@pytest.mark.parametrize("P", [parity(3), cropped_cube(3), three_point_example(), cyclic_counterexample(),
                               HPolytope.from_rows(3, [((1, 1, 0), 1), ((0, -1, -1), -1)])],
                         ids=["parity", "cropped", "three-point", "cyclic", "mixed"])
def test_local_consistency_biconditional(P):
    rng = random.Random(11)
    sysm = build_Mk(P, 1)
    res = sa_emptiness(P, 1)
    samples = [random_y(rng, 3, 1) for _ in range(150)]
    if not res.empty:
        samples.append(res.witness)
    seen = set()
    for y in samples:
        direct = sysm.first_violation(y.values) is None
        seen.add(direct)
        assert bool(check_local_consistency(y, P, 1, 1)) == direct
    assert seen == ({False} if res.empty else {False, True})


@pytest.mark.parametrize("P,k", [(HPolytope.cube(3), 2), (knapsack_cover(4), 2), (knapsack_cover(5), 3), (sts(2), 1),
                                 (HPolytope.from_rows(4, [((1, 1, 0, 0), 1), ((0, 0, 1, -1), 0)]), 3)])
def test_integer_points_survive_every_level(P, k):
    pts = integer_points(P)
    assert pts
    for level in range(k + 1):
        sysm = build_Mk(P, level)
        for x in pts:
            assert sysm.first_violation(SAVector.lift_point(x, level).values) is None


@pytest.mark.parametrize("P,k", [(parity(5), 2), (cropped_cube(3), 2), (three_point_example(), 1), (knapsack_cover(5), 3)])
def test_truncated_witness_is_a_witness(P, k):
    y = sa_emptiness(P, k).witness
    for level in range(k, -1, -1):
        assert build_Mk(P, level).first_violation(y.truncate(level).values) is None


@pytest.mark.parametrize("inst", [i for i in library() if i.name in ("parity-3", "parity-5", "cropped-cube-2", "cropped-cube-3")],
                         ids=lambda i: i.name)
def test_witnesses_stay_witnesses_under_the_group(inst):
    P, G = inst.polytope, inst.group
    for k in range(P.n):
        res = sa_emptiness(P, k)
        if res.empty:
            continue
        sysm = build_Mk(P, k)
        for g in G.generators:
            assert sysm.first_violation(permute_savector(g, res.witness).values) is None


@pytest.mark.parametrize("inst", [i for i in library() if i.polytope.n <= 5], ids=lambda i: i.name)
def test_implied_rows_do_not_change_emptiness(inst):
    P = inst.polytope
    rng = random.Random(5)
    nb = P.non_box_rows() or P.rows
    picks = [rng.choice(P.rows) for _ in range(3)] + [rng.choice(nb)]
    mult = [Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in picks]
    a = [sum(m * r[0][j] for m, r in zip(mult, picks)) for j in range(P.n)]
    b = sum(m * r[1] for m, r in zip(mult, picks))
    P2 = P.with_rows([(a, b)])
    for k in range(min(P.n, 3)):
        assert sa_emptiness(P, k).empty == sa_emptiness(P2, k).empty


def test_shadow_queries():
    assert shadow_contains(parity(3), 1, (h, h, h))
    assert not shadow_contains(parity(3), 1, (1, h, 0))
    assert shadow_implies(parity(3), 1, (1, 1, 0), Fraction(3, 4))
    assert not shadow_implies(parity(3), 0, (1, 1, 0), Fraction(3, 4))


@given(st.integers(1, 4).flatmap(lambda n: st.integers(0, n).flatmap(lambda k: st.tuples(st.just(n), st.just(k), st.lists(
    unit(), min_size=1, max_size=1)))))
def test_vector_file_round_trip(data):
    n, k, (v,) = data
    y = SAVector.from_function(n, k, lambda s: v ** len(s))
    assert parse_savector(format_savector(y)) == y


def test_partitions_cover_every_split():
    parts = list(partitions({1, 2, 3}))
    assert len(parts) == 8 and len({(p.J0, p.J1) for p in parts}) == 8
    assert parts[0] == Partition2({1, 2, 3}, ())
