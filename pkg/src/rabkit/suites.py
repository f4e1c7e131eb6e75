"""Property suites run by ``rabkit verify`` and by the acceptance tests."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import geometry as geo
from . import implosion as imp_mod
from . import limits as lim
from . import permgroups as pg
from . import predicates as pr
from . import universal as uni
from .chambers import BASE
from .colouring import LegalColouring
from .config import Config
from .oracles import bfs_distance_table

SUITES = ("colouring", "squares", "geometry", "extension", "orbits", "implosion", "compgen", "primitivity")


@dataclass
class SuiteResult:
    name: str
    config: str
    ok: bool = True
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        if len(self.failures) < 20:
            self.failures.append(msg)

    def add(self, key: str, n: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + n

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        counts = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"{status} {self.name} [{self.config}] {counts}"

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "config": self.config,
            "ok": self.ok,
            "counts": self.counts,
            "failures": self.failures,
        }


# colouring ----------------------------------------------------------------


def suite_colouring(cfg: Config, res: SuiteResult, radius: int = 3, rng=None) -> None:
    rng = rng or random.Random(cfg.seed)
    lam = cfg.colouring()
    b = lam.building
    rep = lam.verify_legal(radius)
    res.add("panels", rep.panels_checked)
    res.add("conditions", rep.conditions_checked)
    if not rep.ok:
        res.fail(rep.violation)
        return
    ball = b.ball(BASE, radius)
    n = b.diagram.rank
    # path independence: evaluate in shuffled orders on fresh instances
    for _ in range(3):
        other = LegalColouring(b)
        order = ball[:]
        rng.shuffle(order)
        for c in order:
            res.add("reordered")
            if other.vector(c) != lam.vector(c):
                res.fail(f"colour of {b.format(c)} depends on evaluation order")
                break
    # wall constancy across parallel panels
    panels = {b.panel(c, t)[0] for c in ball for t in range(n)}
    by_wall: dict = {}
    for P in panels:
        by_wall.setdefault((P.type, geo.wall(b, P)), []).append(P)
    for group in by_wall.values():
        for P, Q in itertools.combinations(sorted(group, key=lambda P: b.sort_key(P.gate)), 2):
            res.add("parallel_pairs")
            for m in b.panel_members(P):
                if lam.colour(m, P.type) != lam.colour(geo.proj_panel(b, Q, m), P.type):
                    res.fail(f"parallel panels {b.format_panel(P)} and {b.format_panel(Q)} disagree")
    F = cfg.local_data()
    keys = {lam.harmony_key(c, F) for c in b.ball(BASE, n)}
    res.counts["harmony_classes"] = len(keys)
    if len(keys) != F.orbit_count():
        res.fail(f"{len(keys)} harmony classes in ball(base, {n}), expected {F.orbit_count()}")


# squares ------------------------------------------------------------------


def suite_squares(cfg: Config, res: SuiteResult, radius: int = 4, rng=None) -> None:
    lam = cfg.colouring()
    b = lam.building
    n_types = b.diagram.rank
    layers = b.spheres(BASE, radius)
    for n1, layer in enumerate(layers):
        for c in layer:
            # first case: two closer neighbours of c
            preds = [(c[p][0], b.drop(c, p)) for p in b.terminal_letters(c)]
            for (i, d1), (j, d2) in itertools.combinations(preds, 2):
                try:
                    e = geo.close_square(b, BASE, d1, c, d2)
                except (geo.PreconditionError, geo.LemmaViolation) as exc:
                    res.fail(f"case (i) at {b.format(c)}: {exc}")
                    continue
                res.add("case_i")
                if not (b.adjacency(d1, e) == j and b.adjacency(e, d2) == i and b._comm[i][j]):
                    res.fail(f"case (i) at {b.format(c)}: returned chamber is not the fourth corner")
            if n1 + 1 >= len(layers):
                continue
            # second case: d1 = c, step out by i, then sideways by j
            for i in range(n_types):
                for c1 in b.panel(c, i)[1]:
                    if len(c1) != n1 + 1:
                        continue
                    for j in range(n_types):
                        if j == i:
                            continue
                        for c2 in b.panel(c1, j)[1]:
                            if c2 == c1 or len(c2) != n1 + 1:
                                continue
                            try:
                                d2 = geo.close_square_outer(b, BASE, c, c1, c2)
                            except (geo.PreconditionError, geo.LemmaViolation) as exc:
                                res.fail(f"case (ii) at {b.format(c1)}: {exc}")
                                continue
                            res.add("case_ii")
                            if not (b.adjacency(c, d2) == j and b.adjacency(d2, c2) == i):
                                res.fail(f"case (ii) at {b.format(c1)}: wrong fourth corner")


# geometry -----------------------------------------------------------------


def suite_geometry(cfg: Config, res: SuiteResult, radius: int = 3, rng=None, samples: int = 20) -> None:
    rng = rng or random.Random(cfg.seed)
    lam = cfg.colouring()
    b = lam.building
    ball = b.ball(BASE, radius)
    table = bfs_distance_table(b, ball, radius)
    for a, c in enumerate(ball):
        for d in ball[a:]:
            res.add("pairs")
            g = geo.dist(b, c, d)
            if not g == b.word_dist(c, d) == table[c, d]:
                res.fail(f"distance routes disagree on {b.format(c)}, {b.format(d)}")
    panels = sorted(
        {b.panel(c, t)[0] for c in ball for t in range(b.diagram.rank)},
        key=lambda P: (b.sort_key(P.gate), sorted(P.J)),
    )
    parallel = []
    for P, Q in itertools.combinations(panels, 2):
        res.add("panel_pairs")
        by_res = geo.are_parallel(b, P, Q)
        if by_res != geo.are_parallel_by_projection(b, P, Q):
            res.fail(f"parallelism routes disagree on {b.format_panel(P)}, {b.format_panel(Q)}")
        if by_res:
            parallel.append((P, Q))
    res.counts["parallel_pairs"] = len(parallel)
    F = cfg.local_data()
    for _ in range(samples):
        g = uni.random_automorphism(lam, F, rng, radius=1)
        res.add("automorphisms")
        for P, Q in parallel:
            if uni.local_action(g, P) != uni.local_action(g, Q):
                res.fail(f"{g.describe()} acts differently on parallel {b.format_panel(P)}, {b.format_panel(Q)}")
                break


# extension ----------------------------------------------------------------


def suite_extension(cfg: Config, res: SuiteResult, radius: int = 1, eval_radius: int = 3, rng=None) -> None:
    lam = cfg.colouring()
    b = lam.building
    F = cfg.local_data()
    region = b.ball(BASE, eval_radius)
    panels = sorted(
        {b.panel(c, t)[0] for c in b.ball(BASE, radius) for t in range(b.diagram.rank)},
        key=lambda P: (b.sort_key(P.gate), sorted(P.J)),
    )
    for P0 in panels:
        k = P0.type
        members = b.panel_members(P0)
        for f0 in F.groups[k].sorted_elements():
            g = uni.extend_local(lam, P0, f0, F)
            res.add("extensions")
            where = f"{b.format_panel(P0)} f0={pg.format_cycles(f0)}"
            if {g(m) for m in members} != set(members):
                res.fail(f"{where}: panel not stabilised")
            if uni.local_action(g, P0) != f0:
                res.fail(f"{where}: local action differs from f0")
            for c in region:
                x = lam.colour(geo.proj_panel(b, P0, c), k)
                if f0[x] == x and g(c) != c:
                    res.fail(f"{where}: moves wing chamber {b.format(c)}")
                    break
            rep = uni.audit(g, region, F)
            res.add("panels_audited", rep.panels)
            if not rep.ok:
                res.fail(f"{where}: {rep.failures[0]}")


# orbits -------------------------------------------------------------------


def suite_orbits(cfg: Config, res: SuiteResult, radius: int = 2, rng=None) -> None:
    lam = cfg.colouring()
    b = lam.building
    F = cfg.local_data()
    ball = b.ball(BASE, radius)
    for c, d in itertools.product(ball, repeat=2):
        w = uni.u_orbit_check(lam, c, d, F)
        if lam.harmonious(c, d, F):
            res.add("harmonious_pairs")
            if w is None or w(c) != d:
                res.fail(f"no witness for harmonious {b.format(c)}, {b.format(d)}")
                continue
            rep = uni.audit(w, b.ball(c, 1), F)
            if not rep.ok:
                res.fail(f"witness {w.describe()}: {rep.failures[0]}")
        else:
            res.add("separated_pairs")
            if w is not None:
                res.fail(f"witness returned for non-harmonious {b.format(c)}, {b.format(d)}")
    n = b.diagram.rank
    classes = uni.harmony_classes(lam, b.ball(BASE, n), F)
    res.counts["classes"] = len(classes)
    if len(classes) != F.orbit_count():
        res.fail(f"{len(classes)} harmony classes in ball(base, {n}), expected {F.orbit_count()}")
    # U+ closures never cross harmony classes
    gens = uni.uplus_generators(lam, F, ball)
    seen: set = set()
    for c in ball:
        if c in seen:
            continue
        orb = uni.closure_in_region([c], gens, set(ball))
        seen |= orb
        res.add("uplus_classes")
        if any(not lam.harmonious(c, d, F) for d in orb):
            res.fail(f"U+ closure of {b.format(c)} leaves its harmony class")


# implosion ----------------------------------------------------------------


def suite_implosion(
    cfg: Config, res: SuiteResult, radius: int = 3, stab_radius: int = 4, n_gens: int = 50, rng=None
) -> None:
    rng = rng or random.Random(cfg.seed)
    lam = cfg.colouring()
    F = cfg.local_data()
    imp = imp_mod.build_implosion(lam, imp_mod.orbit_partitions(F))
    rep = imp_mod.verify_implosion(imp, radius)
    res.add("chambers", rep.chambers)
    res.add("pairs", rep.pairs)
    res.add("target_ball", rep.target_ball)
    for f in rep.failures:
        res.fail(f)
    gens = uni.uplus_generators(lam, F, lam.building.ball(BASE, 2))
    if len(gens) > n_gens:
        gens = rng.sample(gens, n_gens)
    stab = imp_mod.fibre_stability(imp, gens, stab_radius)
    res.add("generators", stab.generators)
    res.add("stability_checks", stab.checked)
    for f in stab.failures:
        res.fail(f)


# compact generation ---------------------------------------------------------


def suite_compgen(cfg: Config, res: SuiteResult, rng=None) -> None:
    lam = cfg.colouring()
    F = cfg.local_data()
    if cfg.diagram.rank < 2:
        res.fail("rank >= 2 required")
        return
    out = uni.compgen_sets(lam, F)
    res.counts.update(
        B=len(out.B), D=len(out.D), T_pairs=len(out.T_pairs), S_panels=len(out.S_panels),
        region=out.region_size, reached=out.reached,
    )
    for step, ok in (("step 1", out.step1), ("step 2", out.step2), ("step 3", out.step3)):
        if not ok:
            res.fail(f"{step} reachability fails in the bounded region")


# primitivity --------------------------------------------------------------


def suite_primitivity(cfg: Config, res: SuiteResult, rng=None) -> None:
    for n in range(1, 5):
        for G in pg.all_subgroups(n):
            if not pg.is_transitive(G):
                continue
            res.add("transitive_groups")
            if pg.is_primitive(G, "blocks") != pg.is_primitive(G, "higman"):
                res.fail(f"primitivity routes disagree on {G!r}")
    F = cfg.local_data()
    d = cfg.diagram
    for i, G in enumerate(F.groups):
        res.add("local_groups")
        prim = pg.is_primitive(G)
        if prim != pg.is_primitive(G, "higman"):
            res.fail(f"primitivity routes disagree on F_{d.types[i]}")
        if prim and not pg.is_regular(G):
            for x, y in itertools.permutations(range(G.n), 2):
                g = pg.fix_move_witness(G, x, y)
                if g[x] != x or g[y] == y:
                    res.fail(f"bad fix/move witness for F_{d.types[i]}")
        if d.rank >= 2:
            v = pr.verdict_primitive_on_residues(F, d, [t for t in d.types if t != d.types[i]])
            clause = v.reasons[1].outcome
            if clause != (prim and not pg.is_regular(G)):
                res.fail(f"primitivity verdict clause (ii) inconsistent for F_{d.types[i]}")


RUNNERS = {
    "colouring": suite_colouring,
    "squares": suite_squares,
    "geometry": suite_geometry,
    "extension": suite_extension,
    "orbits": suite_orbits,
    "implosion": suite_implosion,
    "compgen": suite_compgen,
    "primitivity": suite_primitivity,
}


def run_suite(name: str, cfg: Config, radius: int | None = None, seed: int | None = None) -> list[SuiteResult]:
    """Run one suite (or ``"all"``) on ``cfg``; one result per suite."""
    if name != "all" and name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")
    names = SUITES if name == "all" else (name,)
    previous = lim.get_limits()
    lim.set_limits(cfg.limits)
    try:
        out = []
        for n in names:
            res = SuiteResult(n, cfg.name)
            kwargs = {"rng": random.Random(cfg.seed if seed is None else seed)}
            if radius is not None and n not in ("compgen", "primitivity"):
                kwargs["radius"] = radius
            try:
                RUNNERS[n](cfg, res, **kwargs)
            except (AssertionError, lim.LimitExceeded) as exc:
                res.fail(f"{type(exc).__name__}: {exc}")
            out.append(res)
        return out
    finally:
        lim.set_limits(previous)
