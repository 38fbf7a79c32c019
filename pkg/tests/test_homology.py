import random

import pytest
from hypothesis import given, strategies as st

from fillcensus.dualgraph import DualGraph, build_dual
from fillcensus.homology import (
    DimensionMismatch,
    HomRep,
    Uniqueness,
    canonical_form,
    check_rep,
    configuration_of,
    enumerate_reps,
    uniqueness_guarantee,
    vertex_shape,
)
from fillcensus.plumbing import StarGraph
from oracles import short_arm_catalog_ok

small_duals = st.lists(
    st.lists(st.integers(-4, -1), min_size=1, max_size=2).map(tuple), min_size=1, max_size=3
).map(DualGraph.from_arms)


def line(M, *minus):
    return (1,) + tuple(-1 if c in minus else 0 for c in range(1, M + 1))


def case_a(n):
    """l-e1-e2-e3, l-e1-e4-e5, l-e1-e6-e7 plus private elements."""
    M = 1 + sum(n)
    rows, nxt = [(1,) + (0,) * M], 2
    for x in n:
        rows.append(line(M, 1, *range(nxt, nxt + x)))
        nxt += x
    return HomRep(M, tuple(rows))


def case_b(n):
    """l-e1-e2-e4, l-e1-e3-e5, l-e2-e3-e6 plus private elements."""
    M = 3 + sum(x - 1 for x in n)
    shared = [(1, 2), (1, 3), (2, 3)]
    rows, nxt = [(1,) + (0,) * M], 4
    for pair_, x in zip(shared, n):
        rows.append(line(M, *pair_, *range(nxt, nxt + x - 1)))
        nxt += x - 1
    return HomRep(M, tuple(rows))


def shuffle_columns(rep, rng):
    cols = list(range(1, rep.basis_size + 1))
    rng.shuffle(cols)
    return HomRep(rep.basis_size, tuple((row[0],) + tuple(row[c] for c in cols) for row in rep.classes))


@pytest.mark.parametrize("n", [(2, 2, 2), (3, 4, 5)])
def test_two_ways_for_three_lines(n):
    dg = DualGraph.from_arms([(-x,) for x in n])
    assert check_rep(dg, case_a(n))
    assert check_rep(dg, case_b(n))
    reps = enumerate_reps(dg)
    assert len(reps) == 2
    assert {canonical_form(case_a(n)), canonical_form(case_b(n))} == set(reps)


def test_negative_control_fresh_element():
    n = (2, 2, 2)
    dg = DualGraph.from_arms([(-x,) for x in n])
    rep = case_a(n)
    rows = [list(r) + [0] for r in rep.classes]
    rows[2][1] = 0
    rows[2][-1] = -1
    bad = HomRep(rep.basis_size + 1, tuple(tuple(r) for r in rows))
    check = check_rep(dg, bad)
    assert not check
    assert any("vertices 1,2" in v for v in check.violations)


def test_check_rep_dimension_errors():
    dg = DualGraph.from_arms([(-2,)])
    with pytest.raises(DimensionMismatch):
        check_rep(dg, HomRep(1, ((1, 0),)))
    with pytest.raises(DimensionMismatch):
        check_rep(dg, HomRep(2, ((1, 0), (1, -1, -1, 0))))


def test_unused_basis_element_is_flagged():
    dg = DualGraph.from_arms([(-1,)])
    rep = HomRep(3, ((1, 0, 0, 0), (1, -1, -1, 0)))
    assert any("unused" in v for v in check_rep(dg, rep).violations)


def test_vertex_shapes():
    dg = DualGraph.from_arms([(-3, -2)])
    assert vertex_shape(dg, 0) == (1, 0, 0)
    assert vertex_shape(dg, 1) == (1, 4, 0)
    assert vertex_shape(dg, 2) == (0, 1, 1)


@pytest.mark.parametrize(
    "arms, quotient, count",
    [
        ([(-2,)] * 4, True, 3),
        ([(-3,), (-2,), (-4,), (-2,)], True, 5),
        ([(-3,)] * 5, True, 5),
        ([(-4,)] * 5, True, 5),
        ([(-5,)], False, 1),
        ([(-1,)], False, 1),
    ],
)
def test_enumeration_counts(arms, quotient, count):
    assert len(enumerate_reps(DualGraph.from_arms(arms), quotient)) == count


def test_enumeration_requires_positive_center():
    assert enumerate_reps(DualGraph.from_arms([(-2,)], central_weight=2)) == []


def test_enumeration_is_deterministic():
    dg = build_dual(StarGraph(-4, ((-3,), (-3,), (-3,))))
    assert enumerate_reps(dg, True) == enumerate_reps(dg, True)
    assert [r.classes for r in enumerate_reps(dg)] == sorted(r.classes for r in enumerate_reps(dg))


def test_canonical_form_relabeling_and_idempotence():
    rng = random.Random(7)
    rep = case_a((2, 3, 2))
    fixed = canonical_form(rep)
    for _ in range(20):
        assert canonical_form(shuffle_columns(rep, rng)) == fixed
    assert canonical_form(fixed) == fixed


def test_arm_swap_identified_under_quotient():
    n = (3, 3, 2)
    dg = DualGraph.from_arms([(-x,) for x in n])
    rep = case_b(n)
    swapped = HomRep(rep.basis_size, (rep.classes[0], rep.classes[2], rep.classes[1], rep.classes[3]))
    assert check_rep(dg, swapped)
    auts = list(dg.automorphisms())
    assert len(auts) == 2
    assert canonical_form(rep, auts) == canonical_form(swapped, auts)


def test_quotient_identifies_relabeled_triple_point():
    dg = DualGraph.from_arms([(-2,)] * 4)
    M = 7
    rows = ((1,) + (0,) * M, line(M, 1, 2, 5), line(M, 1, 3, 6), line(M, 1, 4, 7), line(M, 2, 3, 4))
    rep = HomRep(M, rows)
    moved = HomRep(M, (rows[0], rows[4], rows[2], rows[3], rows[1]))
    assert check_rep(dg, moved)
    assert configuration_of(moved).multipoints == ((2, 3, 4),)
    auts = list(dg.automorphisms())
    assert canonical_form(rep) != canonical_form(moved)
    assert canonical_form(rep, auts) == canonical_form(moved, auts)


def test_configurations_of_three_lines():
    a = configuration_of(case_a((2, 2, 2)))
    assert a.multipoints == ((1, 2, 3),) and a.name == "I_1^3" and a.line_count == 4
    b = configuration_of(case_b((2, 2, 2)))
    assert b.multipoints == () and b.name is None


def test_triple_point_among_four_lines():
    # e1 in lines 1,2,3; line 4 meets each of them in its own point
    M = 7
    rows = (
        (1,) + (0,) * M,
        line(M, 1, 2, 5),
        line(M, 1, 3, 6),
        line(M, 1, 4, 7),
        line(M, 2, 3, 4),
    )
    rep = HomRep(M, rows)
    assert check_rep(DualGraph.from_arms([(-2,)] * 4), rep)
    config = configuration_of(rep)
    assert config.multipoints == ((1, 2, 3),)
    assert config.name == "I_2^4"


@pytest.mark.parametrize(
    "g, expected",
    [
        (StarGraph(-4, ((-3,),) * 3), Uniqueness.GUARANTEED),
        (StarGraph(-10, ((-2,),) * 7), Uniqueness.GUARANTEED),
        (StarGraph(-8, ((-2,),) * 7), Uniqueness.UPPER_BOUND_ONLY),
        (StarGraph(-6, ((-2,),) * 5), Uniqueness.GUARANTEED),
        (StarGraph(-7, ((-2,),) * 6), Uniqueness.UPPER_BOUND_ONLY),
    ],
)
def test_uniqueness(g, expected):
    assert uniqueness_guarantee(g) is expected


@given(small_duals)
def test_soundness_and_pairwise_intersections(dg):
    reps = enumerate_reps(dg)
    lines = dg.center_adjacent()
    for rep in reps:
        assert check_rep(dg, rep), check_rep(dg, rep).violations
        for i, u in enumerate(lines):
            for v in lines[i + 1:]:
                common = [
                    c for c in range(1, rep.basis_size + 1) if rep.classes[u][c] == -1 == rep.classes[v][c]
                ]
                assert len(common) == 1


@given(small_duals, st.randoms(use_true_random=False))
def test_canonical_form_is_a_fixed_point(dg, rnd):
    auts = list(dg.automorphisms())
    for rep in enumerate_reps(dg, True):
        assert canonical_form(rep, auts) == rep
        assert canonical_form(shuffle_columns(rep, rnd), auts) == rep


@given(small_duals)
def test_quotient_is_orbit_count(dg):
    auts = list(dg.automorphisms())
    raw = enumerate_reps(dg)
    assert {canonical_form(r, auts) for r in raw} == set(enumerate_reps(dg, True))


@pytest.mark.parametrize(
    "e0, n",
    [
        (-6, (2, 2, 3)),
        (-7, (2, 3, 4)),
        (-8, (4, 5, 6)),
        (-8, (2, 2, 2, 3)),
        (-9, (6, 6, 2)),
        (-5, (2, 3, 3)),
        (-6, (3, 3, 4, 2)),
    ],
)
def test_short_arm_catalog(e0, n):
    g = StarGraph(e0, tuple((-2,) * (x - 1) for x in n))
    dg = build_dual(g)
    k = len(n)
    ids = dg.center_adjacent()
    reps = enumerate_reps(dg)
    assert reps
    for rep in reps:
        assert short_arm_catalog_ok(rep.classes, ids[:k], ids[k:])
