import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rabkit import geometry as geo
from rabkit import permgroups as pg
from rabkit import universal as uni
from rabkit.chambers import BASE, Building
from rabkit.colouring import LegalColouring
from rabkit.config import default_matrix
from rabkit.diagram import path, tree, triangle
from rabkit.implosion import Implosion, orbit_partitions

SWAP3 = pg.PermGroup(3, [(1, 0, 2)])


def sym_tree():
    lam = LegalColouring(Building(tree((3, 3))))
    F = uni.LocalData(lam.diagram, {"1": pg.symmetric(3), "2": pg.symmetric(3)})
    return lam, F


def swap_tree():
    lam = LegalColouring(Building(tree((3, 3))))
    F = uni.LocalData(lam.diagram, {"1": SWAP3, "2": SWAP3})
    return lam, F


def test_local_data_validation():
    d = tree((3, 3))
    with pytest.raises(ValueError, match="degree 2"):
        uni.LocalData(d, {"1": pg.symmetric(2), "2": pg.symmetric(3)})
    with pytest.raises(ValueError, match="type 2"):
        uni.LocalData(d, {"1": pg.symmetric(3)})
    F = uni.LocalData(d, {"1": SWAP3, "2": pg.cyclic(3)})
    assert F.orbit_count() == 2
    assert F.phi(0, 1, 0) == (1, 0, 2)
    assert F.phi(1, 2, 2) == (0, 1, 2)
    with pytest.raises(uni.MembershipError):
        F.require(0, (0, 2, 1))


def test_extension_seed_on_tree():
    lam, F = sym_tree()
    b = lam.building
    P0 = b.panel(BASE, 0)[0]
    f0 = (1, 0, 2)
    g = uni.extend_local(lam, P0, f0, F)
    assert uni.local_action(g, P0, F) == f0
    ball = b.ball(BASE, 3)
    assert uni.audit(g, ball, F).ok
    fixed_member = lam.member_with_colour(P0, 2)
    wing = [c for c in ball if geo.proj_panel(b, P0, c) == fixed_member]
    assert len(wing) == 7
    assert all(g(c) == c for c in wing)
    gi = uni.invert(g)
    assert all(gi(g(c)) == c and g(gi(c)) == c for c in ball)


def test_extension_rejects_foreign_permutation():
    lam = LegalColouring(Building(tree((3, 3))))
    F = uni.LocalData(lam.diagram, {"1": SWAP3, "2": SWAP3})
    with pytest.raises(uni.MembershipError):
        uni.extend_local(lam, lam.building.panel(BASE, 0)[0], (1, 2, 0), F)


def test_recolouring_on_tree():
    lam, F = sym_tree()
    b = lam.building
    g = uni.recolouring_aut(lam, {"1": (1, 0, 2)}, F)
    assert b.format(g(BASE)) == "1:1"
    phi = [(1, 0, 2), (0, 1, 2)]
    ball = b.ball(BASE, 3)
    for c in ball:
        assert lam.vector(g(c)) == tuple(phi[i][lam.colour(c, i)] for i in range(2))
    assert uni.audit(g, ball, F).ok


def test_u_orbit_check():
    lam, F = swap_tree()
    b = lam.building
    assert isinstance(uni.u_orbit_check(lam, BASE, BASE, F), uni.Identity)
    g = uni.u_orbit_check(lam, BASE, b.parse_word("1:1"), F)
    assert g(BASE) == b.parse_word("1:1")
    assert uni.u_orbit_check(lam, BASE, b.parse_word("1:2"), F) is None


def test_compose_matches_sequential_application():
    lam, F = sym_tree()
    b = lam.building
    g = uni.extend_local(lam, b.panel(BASE, 1)[0], (2, 1, 0), F)
    h = uni.recolouring_aut(lam, {"2": (1, 2, 0)}, F)
    gh = uni.compose(g, h)
    for c in b.ball(BASE, 2):
        assert gh(c) == g(h(c))
    assert all(gh.inverse()(gh(c)) == c for c in b.ball(BASE, 2))


def test_generic_inverse_round_trip():
    lam, F = sym_tree()
    g = uni.compose(
        uni.recolouring_aut(lam, {"1": (2, 0, 1)}, F),
        uni.extend_local(lam, lam.building.panel(BASE, 0)[0], (0, 2, 1), F),
    )
    gi = uni.Inverse(g)
    for c in lam.building.ball(BASE, 2):
        assert gi(g(c)) == c


# random automorphisms across the default matrix --------------------------

MATRIX = default_matrix()


@pytest.mark.parametrize("cfg", MATRIX, ids=[c.name for c in MATRIX])
def test_random_automorphisms_invert_on_random_chambers(cfg):
    lam, F = cfg.colouring(), cfg.local_data()
    b = lam.building
    rng = random.Random(cfg.seed)
    ball = b.ball(BASE, 3)
    for _ in range(4):
        g = uni.random_automorphism(lam, F, rng)
        gi = g.inverse()
        for c in rng.sample(ball, min(25, len(ball))):
            assert gi(g(c)) == c


TRI = LegalColouring(Building(triangle((3, 2, 3))))
TRI_F = uni.LocalData(TRI.diagram, {"1": pg.symmetric(3), "2": pg.symmetric(2), "3": pg.cyclic(3)})
TRI_BALL = TRI.building.ball(BASE, 2)


@given(st.integers(0, 10**6))
def test_random_automorphism_preserves_distance_and_membership(seed):
    rng = random.Random(seed)
    g = uni.random_automorphism(TRI, TRI_F, rng)
    b = TRI.building
    sample = rng.sample(TRI_BALL, 6)
    for c in sample:
        for d in sample:
            assert b.word_dist(g(c), g(d)) == b.word_dist(c, d)
    assert uni.audit(g, TRI.building.ball(BASE, 1), TRI_F).ok


# U+ orbits ---------------------------------------------------------------


def test_alternating_pair_separates_u_and_uplus():
    lam, F = swap_tree()
    b = lam.building
    chain = uni.alternating_pair(lam, F, "1", "2")
    c0, c4 = chain[0], chain[-1]
    assert b.format(c4) == "1:2,2:2,1:1,2:1"
    assert b.word_dist(c0, c4) == 4
    assert lam.harmonious(c0, c4, F)
    orbit = uni.uplus_orbit_on_ball(lam, c0, 4, F)
    klass = uni.harmony_classes(lam, b.ball(BASE, 4), F)[lam.harmony_key(c0, F)]
    assert c4 not in orbit
    assert (len(orbit), len(klass)) == (21, 29)
    imp = Implosion(lam, orbit_partitions(F))
    assert imp.tau(c0) == BASE and imp.tau(c4) != BASE


def test_uplus_orbit_is_whole_ball_for_symmetric_groups():
    lam, F = sym_tree()
    assert len(uni.uplus_orbit_on_ball(lam, BASE, 2, F)) == 13


def test_alternating_pair_requires_intransitive_groups():
    lam, F = sym_tree()
    with pytest.raises(ValueError, match="transitive"):
        uni.alternating_pair(lam, F, "1", "2")


# compact generation ------------------------------------------------------


def test_compgen_on_symmetric_tree():
    lam, F = sym_tree()
    sets = uni.compgen_sets(lam, F)
    assert sets.B == [BASE] and sets.D == []
    assert sets.T_pairs == [(BASE, BASE)]
    assert len(sets.S_panels) == 2
    assert sets.ok


def test_compgen_b_is_transversal_coloured_part_of_ball():
    lam = LegalColouring(Building(tree((3, 3))))
    F = uni.LocalData(lam.diagram, {"1": SWAP3, "2": pg.symmetric(3)})
    sets = uni.compgen_sets(lam, F, check=False)
    b = lam.building
    expected = [
        c
        for c in b.ball(BASE, 2)
        if lam.colour(c, 0) in (0, 2) and lam.colour(c, 1) == 0
    ]
    assert sorted(sets.B) == sorted(expected)


@pytest.mark.parametrize("cfg", MATRIX, ids=[c.name for c in MATRIX])
def test_uplus_generators_act_through_plus_subgroups(cfg):
    lam, F = cfg.colouring(), cfg.local_data()
    b = lam.building
    plus = [pg.plus_subgroup(G) for G in F.groups]
    region = b.ball(BASE, 2)
    for g in uni.uplus_generators(lam, F, b.ball(BASE, 1)):
        rep = uni.audit(g, region, F, allowed=plus)
        assert rep.ok, rep.failures
