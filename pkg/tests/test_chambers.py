import pytest
from hypothesis import given
from hypothesis import strategies as st

from rabkit import limits
from rabkit.chambers import BASE, Building, WordError, bfs_distances
from rabkit.diagram import path, tree, triangle
from rabkit.oracles import bfs_distance_table

PATH = Building(path((3, 3, 3)))
TRIANGLE = Building(triangle((3, 2, 3)))


def letters(building):
    q = building.diagram.q
    return st.lists(
        st.integers(0, building.diagram.rank - 1).flatmap(
            lambda t: st.tuples(st.just(t), st.integers(0, q[t] - 1))
        ),
        max_size=6,
    )


def test_parse_and_format(path_building):
    b = path_building
    c = b.parse_word("3:1,1:2")
    assert c == ((0, 2), (2, 1))
    assert b.format(c) == "1:2,3:1"
    assert b.parse_word("e") == BASE
    assert b.format(BASE) == "e"
    with pytest.raises(WordError):
        b.parse_word("1:5")
    with pytest.raises(WordError):
        b.parse_word("12")


def test_merge_and_delete_rules(tree_building):
    b = tree_building
    assert b.normal_form([(0, 1), (0, 2)]) == ((0, 2),)
    assert b.normal_form([(0, 1), (0, 0)]) == BASE
    assert b.normal_form([(0, 1), (1, 1), (1, 0)]) == ((0, 1),)


def test_panel_members_ordered_by_intrinsic_colour(tree_building):
    b = tree_building
    c = b.parse_word("1:1,2:2")
    P, members = b.panel(c, 1)
    assert P.gate == b.parse_word("1:1")
    assert [b.intrinsic(m, 1) for m in members] == [0, 1, 2]
    assert c in members


def test_ball_sizes(tree_building):
    # every chamber of the (3,3) tree has 4 neighbours, branching 2 per step
    assert [len(tree_building.ball(BASE, r)) for r in range(4)] == [1, 5, 13, 29]


def test_ball_respects_radius_cap(tree_building):
    with pytest.raises(limits.LimitExceeded):
        tree_building.ball(BASE, 7)


def test_residue_gate_and_membership(path_building):
    b = path_building
    c = b.parse_word("2:1,1:2,3:1")
    R = b.residue(c, {0, 2})
    assert R.gate == b.parse_word("2:1")
    assert len(b.residue_members(R)) == 9
    assert b.in_residue(b.parse_word("2:1,3:2"), R)
    assert not b.in_residue(b.parse_word("2:2"), R)


@given(letters(PATH))
def test_normal_form_is_idempotent_and_canonical(ls):
    c = PATH.normal_form(ls)
    assert PATH.normal_form(c) == c
    assert PATH.is_canonical(c)


@given(letters(PATH))
def test_commuting_swap_gives_same_chamber(ls):
    c = PATH.normal_form(ls)
    for p in range(len(c) - 1):
        if PATH._comm[c[p][0]][c[p + 1][0]]:
            swapped = c[:p] + (c[p + 1], c[p]) + c[p + 2:]
            assert PATH.normal_form(swapped) == c


@given(letters(TRIANGLE), letters(TRIANGLE))
def test_word_distance_matches_bfs(a, b):
    c, d = TRIANGLE.normal_form(a), TRIANGLE.normal_form(b)
    assert bfs_distances(TRIANGLE, c, [d], 12)[d] == TRIANGLE.word_dist(c, d)


def test_word_distance_matches_scipy_table():
    b = Building(path((2, 3, 2)))
    ball = b.ball(BASE, 2)
    table = bfs_distance_table(b, ball, 2)
    assert all(table[c, d] == b.word_dist(c, d) for c in ball for d in ball)


def test_length_is_distance_to_base(triangle_building):
    ball = triangle_building.ball(BASE, 3)
    assert all(triangle_building.word_dist(BASE, c) == len(c) for c in ball)
