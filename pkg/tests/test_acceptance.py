"""Acceptance criteria, each under its time limit.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary (see conftest.py). Run alone with
``pytest tests/test_acceptance.py``.
"""
import contextlib
import itertools
import time

import pytest

from rabkit import geometry as geo
from rabkit import permgroups as pg
from rabkit import predicates as pr
from rabkit import universal as uni
from rabkit.chambers import BASE, Building
from rabkit.colouring import LegalColouring
from rabkit.config import default_config, default_matrix, full_matrix
from rabkit.diagram import path, tree
from rabkit.implosion import Implosion, orbit_partitions
from rabkit.oracles import bfs_distance_table
from rabkit.suites import run_suite

RESULTS: list = []

FULL = full_matrix()
# colouring and distances depend on the diagram only
BY_BUILDING = list({c.diagram: c for c in FULL}.values())


@contextlib.contextmanager
def criterion(number, title, limit, per=""):
    start = time.perf_counter()
    detail = {"text": ""}
    ok = False
    try:
        yield detail
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit
        status = "PASS" if ok else "FAIL"
        line = f"{status} criterion {number:>2}: {title} ({elapsed:.1f}s, limit {per or f'{limit}s'})"
        if detail["text"]:
            line += f" {detail['text']}"
        RESULTS.append((number, line))
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


def check(results):
    bad = [r for r in results if not r.ok]
    assert not bad, "\n".join(f"{r.line()}: {r.failures[:3]}" for r in bad)


def test_criterion_01_colouring_legality():
    with criterion(1, "colouring legal on ball r=3, every matrix instance", 10 * len(FULL), per="10s each") as d:
        worst = 0.0
        for cfg in FULL:
            t = time.perf_counter()
            check(run_suite("colouring", cfg, radius=3))
            worst = max(worst, time.perf_counter() - t)
            assert worst < 10, f"{cfg.name} took {worst:.1f}s"
        d["text"] = f"[{len(FULL)} instances, slowest {worst:.2f}s]"


def test_criterion_02_closing_squares():
    configs = [c for c in BY_BUILDING if c.name.startswith("path")]
    with criterion(2, "closing squares on ball r=4 of the path diagrams", 30) as d:
        results = [r for c in configs for r in run_suite("squares", c, radius=4)]
        check(results)
        n = sum(r.counts.get("case_i", 0) + r.counts.get("case_ii", 0) for r in results)
        assert n > 0
        d["text"] = f"[{n} squares]"


def test_criterion_03_distance_oracle():
    with criterion(3, "gallery-reduction distance equals BFS on ball r=3", 30) as d:
        pairs = 0
        for cfg in BY_BUILDING:
            b = Building(cfg.diagram)
            ball = b.ball(BASE, 3)
            table = bfs_distance_table(b, ball, 3)
            for a, c in enumerate(ball):
                for e in ball[a:]:
                    pairs += 1
                    assert geo.dist(b, c, e) == table[c, e], (cfg.name, c, e)
        d["text"] = f"[{len(BY_BUILDING)} buildings, {pairs} pairs]"


def test_criterion_04_parallelism():
    with criterion(4, "parallelism routes agree; 20 automorphisms act alike on parallel panels", 60) as d:
        results = [r for c in BY_BUILDING for r in run_suite("geometry", c, radius=3)]
        check(results)
        d["text"] = f"[{sum(r.counts['panel_pairs'] for r in results)} panel pairs]"


def test_criterion_05_extension_contract():
    with criterion(5, "extension contract on tree q=(3,3) with symmetric groups", 60) as d:
        results = run_suite("extension", default_config())
        check(results)
        d["text"] = f"[{results[0].counts['extensions']} extensions]"


def test_criterion_06_orbit_characterisation():
    with criterion(6, "harmony classes realised on ball r=2, every matrix instance", 60) as d:
        results = [r for c in FULL for r in run_suite("orbits", c, radius=2)]
        check(results)
        d["text"] = f"[{sum(r.counts['harmonious_pairs'] for r in results)} witnessed pairs]"


def test_criterion_07_uplus_separation():
    with criterion(7, "U+ separates a harmonious pair; symmetric groups give one class", 60) as d:
        lam = LegalColouring(Building(tree((3, 3))))
        b = lam.building
        swap = pg.PermGroup(3, [(1, 0, 2)])
        F = uni.LocalData(lam.diagram, {"1": swap, "2": swap})
        chain = uni.alternating_pair(lam, F, "1", "2")
        c0, c4 = chain[0], chain[-1]
        assert b.word_dist(c0, c4) == 4
        assert lam.harmonious(c0, c4, F)
        imp = Implosion(lam, orbit_partitions(F))
        assert imp.tau(c0) != imp.tau(c4)
        assert c4 not in uni.uplus_orbit_on_ball(lam, c0, 4, F)

        sym = uni.LocalData(lam.diagram, {"1": pg.symmetric(3), "2": pg.symmetric(3)})
        ball = set(b.ball(BASE, 2))
        gens = uni.uplus_generators(lam, sym, ball)
        classes = uni.harmony_classes(lam, ball, sym)
        for members in classes.values():
            assert uni.closure_in_region([members[0]], gens, ball) == set(members)
        d["text"] = f"[{len(ball)} chambers in one class]"


def test_criterion_08_implosion():
    with criterion(8, "implosion verified at r=3; fibres stable under 50 U+ generators at r=4", 60) as d:
        results = [r for c in default_matrix() for r in run_suite("implosion", c)]
        check(results)
        assert all(r.counts["generators"] <= 50 for r in results)
        d["text"] = f"[{sum(r.counts['stability_checks'] for r in results)} stability checks]"


def test_criterion_09_compact_generation():
    with criterion(9, "compact generation sets on tree q=(3,3) with symmetric groups", 60) as d:
        cfg = default_config()
        sets = uni.compgen_sets(cfg.colouring(), cfg.local_data())
        assert sets.B == [BASE] and sets.D == []
        assert sets.step1 and sets.step2 and sets.step3
        d["text"] = f"[{sets.reached} of {sets.region_size} chambers reached]"


def _closure(n, gens):
    out = {pg.identity(n)}
    frontier = set(out)
    while frontier:
        frontier = {pg.compose(g, h) for h in frontier for g in gens} - out
        out |= frontier
    return out


def test_criterion_10_permutation_groups():
    with criterion(10, "primitivity routes agree; plus/regular/witness by enumeration, degree <= 4", 10) as d:
        checked = 0
        for n in range(1, 5):
            e = pg.identity(n)
            for G in pg.all_subgroups(n):
                stab = [g for g in G.elements if any(g[x] == x for x in range(n))]
                assert pg.plus_subgroup(G).elements == _closure(n, stab)
                free = all(g == e or all(g[x] != x for x in range(n)) for g in G.elements)
                assert pg.is_regular(G) == (free and len(pg.orbit_of(G, 0)) == n)
                if not pg.is_transitive(G):
                    continue
                checked += 1
                prim = pg.is_primitive(G, "blocks")
                assert prim == pg.is_primitive(G, "higman")
                if prim and not pg.is_regular(G):
                    for x, y in itertools.permutations(range(n), 2):
                        g = pg.fix_move_witness(G, x, y)
                        assert g in G.elements and g[x] == x and g[y] != y
        d["text"] = f"[{checked} transitive groups]"


def test_criterion_11_verdict_consistency():
    with criterion(11, "verdicts consistent over the full matrix", 10) as d:
        for cfg in FULL:
            F, dg = cfg.local_data(), cfg.diagram
            if pr.verdict_simple(F).value:
                assert pr.verdict_u_eq_uplus(F).value
            v = pr.verdict_discrete(F)
            for G, reason in zip(F.groups, v.reasons):
                w = pg.free_witness(G)
                assert reason.outcome == (w is None)
                if w is not None:
                    assert w != pg.identity(G.n) and any(w[x] == x for x in range(G.n))
            assert v.value == all(pg.is_free(G) for G in F.groups)
            for k, t in enumerate(dg.types):
                pv = pr.verdict_primitive_on_residues(F, dg, [s for s in dg.types if s != t])
                G = F.groups[k]
                clause_ii = pg.is_primitive(G, "higman") and not pg.is_regular(G)
                clause_iii = all(
                    pg.is_transitive(F.groups[i])
                    for i in range(dg.rank)
                    if i != k and not dg.commutes(i, k)
                )
                assert pv.reasons[1].outcome == clause_ii
                assert pv.reasons[2].outcome == clause_iii
                assert pv.value == (clause_ii and clause_iii)
        d["text"] = f"[{len(FULL)} instances]"
