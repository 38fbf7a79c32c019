from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fillcensus.plumbing import (
    EmptyArm,
    IntegerSymmetricMatrix,
    OutOfRange,
    SeifertData,
    StarGraph,
    WeightTooLarge,
    arm_to_rational,
    cokernel,
    graph_from_seifert,
    homology_of_boundary,
    intersection_matrix,
    is_dually_positive,
    rational_to_arm,
    seifert_from_graph,
    smith_diagonal,
)
from oracles import cf_value, cofactor_det, sympy_invariant_factors

arms_st = st.lists(st.integers(min_value=-7, max_value=-2), min_size=1, max_size=6).map(tuple)
graphs_st = st.builds(
    lambda arms, extra: StarGraph(-len(arms) - 1 - extra, tuple(arms)),
    st.lists(arms_st, min_size=1, max_size=4),
    st.integers(min_value=0, max_value=3),
)
small_graphs_st = st.builds(
    lambda arms, extra: StarGraph(-len(arms) - 1 - extra, tuple(arms)),
    st.lists(st.lists(st.integers(-7, -2), min_size=1, max_size=2).map(tuple), min_size=1, max_size=3),
    st.integers(min_value=0, max_value=3),
)


@pytest.mark.parametrize(
    "arm, value",
    [
        ((-2,), Fraction(-2)),
        ((-2, -2), Fraction(-3, 2)),
        ((-4, -2), Fraction(-7, 2)),
        ((-3,), Fraction(-3)),
    ],
)
def test_arm_to_rational_examples(arm, value):
    assert arm_to_rational(arm) == value


@pytest.mark.parametrize("n", range(2, 9))
def test_minus_two_chain_gives_n_over_n_minus_one(n):
    assert arm_to_rational((-2,) * (n - 1)) == Fraction(-n, n - 1)


def test_arm_to_rational_matches_independent_evaluation():
    for arm in [(-2, -5, -3), (-7,), (-2, -2, -2, -3)]:
        assert arm_to_rational(arm) == -cf_value([-b for b in arm])


@pytest.mark.parametrize(
    "arm, error",
    [((), EmptyArm), ((-1,), WeightTooLarge), ((-3, 0), WeightTooLarge)],
)
def test_arm_to_rational_rejects(arm, error):
    with pytest.raises(error):
        arm_to_rational(arm)


@pytest.mark.parametrize(
    "r, arm",
    [(-2, (-2,)), (Fraction(-3, 2), (-2, -2)), (Fraction(-7, 2), (-4, -2)), ("-10/3", (-4, -2, -2))],
)
def test_rational_to_arm_examples(r, arm):
    assert rational_to_arm(r) == arm


def test_rational_to_arm_against_short_arm_search():
    # every arm of length <= 3 with entries in [-6, -2], evaluated directly
    table = {}
    for a in range(-6, -1):
        table.setdefault(cf_value([-a]), (a,))
        for b in range(-6, -1):
            table.setdefault(cf_value([-a, -b]), (a, b))
            for c in range(-6, -1):
                table.setdefault(cf_value([-a, -b, -c]), (a, b, c))
    for value, arm in table.items():
        assert rational_to_arm(-value) == arm


@pytest.mark.parametrize("r", [-1, Fraction(-1, 2), 0, 3])
def test_rational_to_arm_out_of_range(r):
    with pytest.raises(OutOfRange):
        rational_to_arm(r)


@given(arms_st)
def test_arm_round_trip(arm):
    assert rational_to_arm(arm_to_rational(arm)) == arm


@given(st.fractions(max_denominator=50).filter(lambda x: x < -1))
def test_rational_round_trip(r):
    assert arm_to_rational(rational_to_arm(r)) == r


@given(arms_st)
def test_rational_range(arm):
    r = arm_to_rational(arm)
    assert r < -1
    # the leading entry is the floor of the value
    assert arm[0] <= r < arm[0] + 1


@given(st.integers(min_value=1, max_value=12))
def test_minus_two_chain_range(n):
    assert arm_to_rational((-2,) * n) == Fraction(-(n + 1), n)


def test_seifert_conversions():
    g = graph_from_seifert(SeifertData(-4, (-3, -3, -3)))
    assert g == StarGraph(-4, ((-3,), (-3,), (-3,)))
    assert graph_from_seifert(SeifertData(-5, (-2,) * 4)) == StarGraph(-5, ((-2,),) * 4)
    data = SeifertData(-4, (Fraction(-3, 2),) * 3)
    assert seifert_from_graph(graph_from_seifert(data)) == data


@given(graphs_st)
def test_seifert_round_trip_preserves_arm_order(g):
    assert graph_from_seifert(seifert_from_graph(g)) == g


def test_seifert_rejects_large_coefficient():
    with pytest.raises(OutOfRange):
        SeifertData(-4, (Fraction(-1, 2),))


def test_star_graph_needs_arms():
    with pytest.raises(EmptyArm):
        StarGraph(-3, ())
    with pytest.raises(EmptyArm):
        StarGraph(-3, ((),))


@pytest.mark.parametrize(
    "g, expected",
    [
        (StarGraph(-4, ((-3,), (-3,), (-3,))), True),
        (StarGraph(-4, ((-2,),) * 4), False),
        (StarGraph(-5, ((-2,),) * 4), True),
        (StarGraph(-6, ((-2, -1),)), False),
    ],
)
def test_is_dually_positive(g, expected):
    assert is_dually_positive(g) is expected


@given(small_graphs_st, st.randoms())
def test_dual_positivity_and_det_invariant_under_arm_permutation(g, rnd):
    arms = list(g.arms)
    rnd.shuffle(arms)
    h = StarGraph(g.central_weight, tuple(arms))
    assert is_dually_positive(h) == is_dually_positive(g)
    assert abs(cofactor_det(intersection_matrix(h).entries)) == abs(cofactor_det(intersection_matrix(g).entries))


def test_intersection_matrix_examples():
    m = intersection_matrix(StarGraph(-4, ((-3,), (-3,), (-3,))))
    assert m.entries == ((-4, 1, 1, 1), (1, -3, 0, 0), (1, 0, -3, 0), (1, 0, 0, -3))
    assert intersection_matrix(StarGraph(-2, ((-2,),))).dimension == 2
    chain = intersection_matrix(StarGraph(-5, ((-2, -2),)))
    assert chain.entries == ((-5, 1, 0), (1, -2, 1), (0, 1, -2))


def test_single_vertex_matrix_and_homology():
    m = IntegerSymmetricMatrix(1, ((-2,),))
    assert cokernel(m.entries).free_rank == 0
    assert cokernel(m.entries).torsion_factors == (2,)


def test_symmetric_matrix_validation():
    with pytest.raises(ValueError):
        IntegerSymmetricMatrix(2, ((0, 1), (2, 0)))
    with pytest.raises(ValueError):
        IntegerSymmetricMatrix(2, ((0, 1),))


@pytest.mark.parametrize(
    "g",
    [
        StarGraph(-4, ((-3,), (-3,), (-3,))),
        StarGraph(-5, ((-2,),) * 4),
        StarGraph(-4, ((-2, -2), (-2,), (-5, -2))),
    ],
)
def test_homology_matches_sympy_and_determinant(g):
    entries = intersection_matrix(g).entries
    h = homology_of_boundary(g)
    det = abs(cofactor_det(entries))
    assert h.free_rank == 0
    assert h.torsion_order == det
    expected = [d for d in sympy_invariant_factors(entries) if d > 1]
    assert list(h.torsion_factors) == expected


def test_four_three_three_three_has_order_81():
    h = homology_of_boundary(StarGraph(-4, ((-3,), (-3,), (-3,))))
    assert h.torsion_order == 81
    assert h.free_rank == 0


def test_free_rank_from_degenerate_form():
    # a 0-framed unknot: H_1 = Z
    inv = cokernel(((0,),))
    assert inv.free_rank == 1 and inv.torsion_factors == ()
    inv = cokernel(((2, 4), (4, 8)))
    assert inv.free_rank == 1 and inv.torsion_factors == (2,)


@given(
    st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3)
)
def test_smith_diagonal_matches_sympy(rows):
    ours = smith_diagonal(rows)
    theirs = sympy_invariant_factors(rows)
    assert sorted(d for d in ours if d) == sorted(d for d in theirs if d)
    assert ours.count(0) == theirs.count(0)
    nonzero = [d for d in ours if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@given(small_graphs_st)
def test_torsion_order_is_abs_det(g):
    det = abs(cofactor_det(intersection_matrix(g).entries))
    h = homology_of_boundary(g)
    assert det != 0
    assert h.free_rank == 0 and h.torsion_order == det
