from __future__ import annotations

from fractions import Fraction

import pytest

from hierarchy_collapse.config import ResourceLimit
from hierarchy_collapse.instances import (
    cropped_cube,
    cyclic_counterexample,
    knapsack_cover,
    library,
    parity,
    three_point_example,
)
from hierarchy_collapse.perm_group import PermGroup, reynolds_full
from hierarchy_collapse.polytope import (
    HPolytope,
    VPolytope,
    certify_invariance,
    contains_polytope,
    hull,
    is_feasible,
    same_set,
    vertices,
)
from hierarchy_collapse.ls_operators import (
    LiftMatrix,
    bcc_closure,
    d_implies_a_points,
    iterate_emptiness,
    lift_at,
    ls0_closure,
    ls0_step_nonempty,
    ls_closure,
    ls_step_nonempty,
    projected_closure,
    verify_lift,
)
from hierarchy_collapse.sa_hierarchy import sa_emptiness, shadow_contains, shadow_implies

h, q = Fraction(1, 2), Fraction(1, 4)
SMALL = [i for i in library() if i.polytope.n <= 3]


def rank_one(x):
    v = (1,) + tuple(x)
    return LiftMatrix(tuple(tuple(Fraction(a * b) for b in v) for a in v))


def test_step_examples():
    res = ls0_step_nonempty(HPolytope.cube(3))
    assert res.nonempty and verify_lift(HPolytope.cube(3), res.lift, False)
    res = ls0_step_nonempty(cyclic_counterexample())
    assert res.nonempty and verify_lift(cyclic_counterexample(), res.lift, False)
    P = knapsack_cover(4)
    assert verify_lift(P, rank_one((1, 1, 0, 0)), True)
    assert ls_step_nonempty(parity(3)).nonempty
    assert ls_step_nonempty(cropped_cube(2)).nonempty
    assert not ls_step_nonempty(HPolytope.empty(3)).nonempty
    assert not ls0_step_nonempty(HPolytope.empty(3)).nonempty


def test_symmetric_witness_is_symmetric():
    Y = ls_step_nonempty(parity(3)).lift.Y
    assert all(Y[i][j] == Y[j][i] for i in range(4) for j in range(4))


def test_lift_verification_rejects_bad_matrices():
    P = parity(3)
    good = ls_step_nonempty(P).lift
    rows = [list(r) for r in good.Y]
    rows[1][2] += 1
    assert not verify_lift(P, LiftMatrix(tuple(map(tuple, rows))), False)
    assert not verify_lift(P, rank_one((1, 0, 0)), False)


def test_bcc_examples():
    assert same_set(bcc_closure(HPolytope.cube(2), 1), HPolytope.cube(2))
    B = bcc_closure(parity(3), 1)
    expected = hull(VPolytope(3, ((0, h, 1), (0, 1, h), (1, 0, h), (1, h, 0))))
    assert same_set(B, expected)
    P = HPolytope.from_rows(2, [((-1, 0), -h)])
    assert same_set(bcc_closure(P, 1), HPolytope.from_rows(2, [((-1, 0), 0)]))


def test_closure_examples():
    assert same_set(ls0_closure(HPolytope.cube(3)), HPolytope.cube(3))
    assert same_set(ls_closure(HPolytope.cube(2)), HPolytope.cube(2))
    T = three_point_example()
    L0, L = ls0_closure(T), ls_closure(T)
    assert contains_polytope(L0, L) and not contains_polytope(L, L0)
    for a, b in L.non_box_rows():
        assert shadow_implies(T, 1, a, b)
    for v in vertices(L).points:
        assert shadow_contains(T, 1, v)
    assert is_feasible(ls0_closure(cyclic_counterexample())).feasible
    assert is_feasible(ls_closure(parity(3))).feasible


@pytest.mark.parametrize("inst", SMALL, ids=lambda i: i.name)
def test_two_routes_to_the_LS0_closure_agree(inst):
    assert same_set(ls0_closure(inst.polytope), projected_closure(inst.polytope, False))


@pytest.mark.parametrize("inst", SMALL, ids=lambda i: i.name)
def test_closure_membership_matches_anchored_lift(inst):
    P = inst.polytope
    for symmetric, C in ((False, ls0_closure(P)), (True, ls_closure(P))):
        if not is_feasible(C).feasible:
            continue
        for v in vertices(C).points:
            assert lift_at(P, v, symmetric) is not None
        for v in vertices(P).points:
            assert (lift_at(P, v, symmetric) is not None) == C.contains(v)


@pytest.mark.parametrize("inst", SMALL, ids=lambda i: i.name)
def test_sandwich(inst):
    P = inst.polytope
    L0, L = ls0_closure(P), ls_closure(P)
    assert contains_polytope(P, L0) and contains_polytope(L0, L)
    for k in (1, 2):
        res = sa_emptiness(P, k)
        if res.empty:
            continue
        x = res.witness.level1()
        assert L.contains(x) and L0.contains(x)
        if k == 2:
            assert ls_closure(L).contains(x) and ls0_closure(L0).contains(x)


@pytest.mark.parametrize("inst", SMALL, ids=lambda i: i.name)
def test_closures_keep_the_symmetry(inst):
    for C in (ls0_closure(inst.polytope), ls_closure(inst.polytope)):
        assert certify_invariance(C, inst.group)


@pytest.mark.parametrize("inst", [i for i in library() if i.polytope.n <= 5], ids=lambda i: i.name)
def test_averaged_witness_is_a_witness(inst):
    P, G = inst.polytope, inst.group
    for step, symmetric in ((ls0_step_nonempty(P), False), (ls_step_nonempty(P), True)):
        if not step.nonempty:
            continue
        avg = reynolds_full(step.x, G)
        assert lift_at(P, avg, symmetric) is not None


@pytest.mark.parametrize("inst", SMALL + [i for i in library() if i.name == "parity-5"], ids=lambda i: i.name)
def test_step_decides_closure_emptiness(inst):
    P = inst.polytope
    assert ls0_step_nonempty(P).nonempty == is_feasible(ls0_closure(P)).feasible
    if P.n <= 3:
        assert ls_step_nonempty(P).nonempty == is_feasible(ls_closure(P)).feasible


def test_iteration_examples():
    assert iterate_emptiness(parity(3), "LS0", 2).rounds == ("nonempty", "empty")
    assert iterate_emptiness(cropped_cube(2), "LS0", 2).rounds == ("nonempty", "empty")
    assert iterate_emptiness(cropped_cube(3), "LS0", 3).rounds == ("nonempty", "nonempty", "empty")
    assert iterate_emptiness(HPolytope.cube(2), "LS", 3).rounds == ("nonempty",) * 3
    rep = iterate_emptiness(knapsack_cover(4), "LS", 2)
    assert rep.rounds == ("nonempty", "guard-skipped")
    with pytest.raises(ValueError):
        iterate_emptiness(parity(3), "SA", 1)


def test_projection_guard():
    with pytest.raises(ResourceLimit):
        ls_closure(knapsack_cover(4))


def test_face_points_from_lifts():
    fp = d_implies_a_points(parity(3), 1)
    assert fp.ok and set(fp.points) == {(0,), (1,)}
    for key, pt in fp.points.items():
        assert parity(3).contains(pt) and pt[0] == key[0] and pt[1] == pt[2]
    fp0 = d_implies_a_points(parity(3), 0)
    assert fp0.ok and fp0.points[()] == (h, h, h)
    assert not d_implies_a_points(parity(3), 2).ok
    fp = d_implies_a_points(cropped_cube(3), 2)
    assert fp.ok and len(fp.points) == 4
    for key, pt in fp.points.items():
        assert cropped_cube(3).contains(pt) and pt[:2] == key


def test_pivot_cap_is_never_read_as_emptiness():
    from hierarchy_collapse.config import set_limits

    set_limits(pivots=1)
    assert iterate_emptiness(parity(3), "LS0", 2).rounds == ("guard-skipped",) * 2
    assert sa_emptiness(parity(3), 1).empty is None
    with pytest.raises(ResourceLimit):
        is_feasible(parity(5))
