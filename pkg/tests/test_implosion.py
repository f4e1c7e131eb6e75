import pytest

from rabkit import permgroups as pg
from rabkit import universal as uni
from rabkit.chambers import BASE, Building
from rabkit.colouring import LegalColouring
from rabkit.diagram import path, tree, triangle
from rabkit.implosion import (
    Implosion,
    ImplosionInconsistency,
    PartitionError,
    fibre_stability,
    normalise_partition,
    orbit_partitions,
    parse_classes,
    universal_relation,
    verify_implosion,
)


def test_partition_normalisation():
    assert normalise_partition([[2, 1], [0]], 3) == (frozenset({0}), frozenset({1, 2}))
    with pytest.raises(PartitionError, match="two classes"):
        normalise_partition([[0, 1], [1, 2]], 3)
    with pytest.raises(PartitionError, match="miss"):
        normalise_partition([[0, 1]], 3)
    with pytest.raises(PartitionError, match="outside"):
        normalise_partition([[0, 1, 2, 3]], 3)


def test_parse_classes():
    d = tree((3, 3))
    eqs = parse_classes("1:0|1,2;2:*", d)
    assert eqs == {"1": (frozenset({0}), frozenset({1, 2})), "2": universal_relation(3)}
    with pytest.raises(PartitionError):
        parse_classes("1:0|x", d)


def test_tree_collapse_to_single_type():
    lam = LegalColouring(Building(tree((3, 3))))
    imp = Implosion(lam, parse_classes("1:0|1,2;2:*", lam.diagram))
    assert imp.kept == (0,)
    assert imp.target_diagram.q == (2,)
    assert imp.tau(BASE) == BASE
    assert imp.tau(lam.building.parse_word("2:1")) == BASE
    rep = verify_implosion(imp, 3)
    assert rep.ok, rep.failures


def test_discrete_relation_is_identity():
    lam = LegalColouring(Building(path((3, 2, 3))))
    imp = Implosion(lam, {})
    b = lam.building
    assert imp.target_diagram == b.diagram
    assert all(imp.tau(c) == c for c in b.ball(BASE, 3))


def test_universal_everywhere_gives_rank_zero():
    lam = LegalColouring(Building(tree((3, 3))))
    imp = Implosion(lam, {"1": universal_relation(3), "2": universal_relation(3)})
    assert imp.target_diagram.rank == 0
    assert {imp.tau(c) for c in lam.building.ball(BASE, 2)} == {BASE}


@pytest.mark.parametrize(
    "diagram, spec",
    [
        (triangle((3, 3, 3)), "1:0|1,2;3:0,2|1"),
        (path((3, 3, 3)), "2:0|1,2"),
        (path((3, 2, 3)), "1:0,1|2;3:*"),
    ],
)
def test_implosions_verify(diagram, spec):
    lam = LegalColouring(Building(diagram))
    rep = verify_implosion(Implosion(lam, parse_classes(spec, diagram)), 3)
    assert rep.ok, rep.failures


def test_lift_maps_back():
    lam = LegalColouring(Building(triangle((3, 3, 3))))
    imp = Implosion(lam, parse_classes("2:0|1,2", lam.diagram))
    tb = imp.target
    z = tb.parse_word("1:1,2:1,3:2")
    gal = [tb.normal_form(z[:k]) for k in range(len(z) + 1)]
    lifted = imp.lift(gal)
    assert [imp.tau(c) for c in lifted] == gal
    with pytest.raises(ValueError, match="fibre"):
        imp.lift(gal[1:])


def test_orbit_implosion_is_stable_under_uplus_generators():
    lam = LegalColouring(Building(tree((3, 3))))
    swap = pg.PermGroup(3, [(1, 0, 2)])
    F = uni.LocalData(lam.diagram, {"1": swap, "2": swap})
    imp = Implosion(lam, orbit_partitions(F))
    gens = uni.uplus_generators(lam, F, lam.building.ball(BASE, 2))
    rep = fibre_stability(imp, gens, 3)
    assert rep.ok, rep.failures


def test_fibre_violation_detected():
    lam = LegalColouring(Building(tree((3, 3))))
    b = lam.building
    imp = Implosion(lam, parse_classes("1:0,1|2", lam.diagram))
    g = uni.Recolouring(lam, [(2, 1, 0), (0, 1, 2)], BASE, b.parse_word("1:2"))
    assert not fibre_stability(imp, [g], 2).ok
    with pytest.raises(ImplosionInconsistency, match="fibre"):
        imp.push(g, b.ball(BASE, 2))
