"""Lazily evaluated elements of the universal group and orbit machinery."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from . import limits
from . import permgroups as pg
from .chambers import BASE, Building, Chamber, ResidueRef
from .colouring import LegalColouring
from .diagram import Diagram


class MembershipError(ValueError):
    """A permutation that should lie in a local group does not."""


class EvaluationError(AssertionError):
    """Two derivations of an image disagree (an implementation bug)."""


class LocalData:
    """One permutation group ``F_i`` on ``range(q_i)`` per type."""

    def __init__(self, diagram: Diagram, groups: Mapping):
        self.diagram = diagram
        gs = []
        for a, t in enumerate(diagram.types):
            G = groups.get(t, groups.get(a))
            if G is None:
                raise ValueError(f"no local group given for type {t}")
            if G.n != diagram.q[a]:
                raise ValueError(
                    f"local group for type {t} has degree {G.n}, but q_{t} = {diagram.q[a]}"
                )
            gs.append(G)
        self.groups = tuple(gs)
        self._orbits = tuple(pg.orbits(G) for G in self.groups)
        self._orbit_index = tuple(
            {x: k for k, orb in enumerate(orbs) for x in orb} for orbs in self._orbits
        )
        self._phi = lru_cache(maxsize=None)(self._transversal)

    def __getitem__(self, i) -> pg.PermGroup:
        return self.groups[self.diagram.pos(i)]

    def __repr__(self):
        return "LocalData(" + ", ".join(
            f"{t}: {G!r}" for t, G in zip(self.diagram.types, self.groups)
        ) + ")"

    def orbits(self, i) -> list:
        return self._orbits[self.diagram.pos(i)]

    def orbit_index(self, i: int, x: int) -> int:
        return self._orbit_index[i][x]

    def orbit_count(self) -> int:
        out = 1
        for orbs in self._orbits:
            out *= len(orbs)
        return out

    def _transversal(self, i: int, x: int, y: int) -> tuple:
        return pg.transversal(self.groups[i], x, y)

    def phi(self, i: int, x: int, y: int) -> tuple:
        """Fixed element of ``F_i`` sending ``x`` to ``y`` (identity if ``x == y``)."""
        return self._phi(i, x, y)

    def require(self, i: int, f) -> tuple:
        f = tuple(f)
        if f not in self.groups[i].elements:
            raise MembershipError(
                f"{pg.format_cycles(f)} is not in the local group of type {self.diagram.types[i]}"
            )
        return f


# automorphisms -----------------------------------------------------------


class Automorphism:
    """Type-preserving automorphism evaluated on demand and memoized."""

    def __init__(self, colouring: LegalColouring):
        self.colouring = colouring
        self.building: Building = colouring.building
        self._memo: dict = {}

    def __call__(self, c: Chamber) -> Chamber:
        got = self._memo.get(c)
        if got is None:
            got = self._eval(c)
            self._memo[c] = got
        return got

    def _eval(self, c: Chamber) -> Chamber:  # pragma: no cover
        raise NotImplementedError

    def inverse(self) -> "Automorphism":
        return Inverse(self)

    def describe(self) -> str:
        return type(self).__name__


class Identity(Automorphism):
    def _eval(self, c):
        return c

    def inverse(self):
        return self

    def describe(self):
        return "id"


class ExtensionSeed(Automorphism):
    """Extension of a local permutation ``f0`` at the panel ``P0``.

    Built outwards from ``P0``: a chamber with one neighbour closer to
    ``P0`` follows the transversal map of that neighbour's colour shift; a
    chamber with several such neighbours is pinned by the square they span.
    """

    def __init__(self, colouring: LegalColouring, P0: ResidueRef, f0, F: LocalData):
        super().__init__(colouring)
        if not P0.is_panel:
            raise ValueError("an extension seed needs a panel")
        self.P0 = P0
        self.k = P0.type
        self.F = F
        self.f0 = F.require(self.k, pg.check_perm(f0, colouring.diagram.q[self.k]))
        self._members = self.building.panel_members(P0)
        self._dist: dict = {}

    def describe(self):
        t = self.colouring.diagram.types[self.k]
        return f"ext[{t}-panel@{self.building.format(self.P0.gate)}, {pg.format_cycles(self.f0)}]"

    def dist_to_P0(self, c: Chamber) -> int:
        n = self._dist.get(c)
        if n is None:
            n = self._dist[c] = min(self.building.word_dist(c, m) for m in self._members)
        return n

    def closer(self, c: Chamber, n: int) -> list[tuple[int, Chamber]]:
        """Neighbours of ``c`` one step closer to ``P0`` (one per type at most)."""
        b = self.building
        out = []
        for t in range(b.diagram.rank):
            for d in b.panel(c, t)[1]:
                if d != c and self.dist_to_P0(d) == n - 1:
                    out.append((t, d))
        return out

    def _eval(self, c):
        b = self.building
        lam = self.colouring
        n = self.dist_to_P0(c)
        limits.check_depth(n)
        if n == 0:
            return lam.member_with_colour(self.P0, self.f0[lam.colour(c, self.k)])
        D = self.closer(c, n)
        if len(D) == 1:
            i, d = D[0]
            gd = self(d)
            x, y = lam.colour(d, i), lam.colour(gd, i)
            f = self.F.phi(i, x, y)
            target = f[lam.colour(c, i)]
            return lam.member_with_colour(b.panel(gd, i)[0], target)
        images = set()
        for (i, d1), (j, d2) in zip(D, D[1:] + D[:1]):
            P = set(b.panel(self(d1), i)[1])
            Q = set(b.panel(self(d2), j)[1])
            meet = P & Q
            if len(meet) != 1:
                raise EvaluationError(f"square at {b.format(c)} does not close")
            images |= meet
        if len(images) != 1:
            raise EvaluationError(f"square images at {b.format(c)} disagree")
        return images.pop()

    def inverse(self):
        return PanelStabiliserInverse(self)


class PanelStabiliserInverse(Automorphism):
    """Inverse of an automorphism stabilising ``P0``, by search in the ball around ``P0``."""

    def __init__(self, g: ExtensionSeed):
        super().__init__(g.colouring)
        self.g = g
        self._f0inv = pg.inverse(g.f0)

    def describe(self):
        return f"inv({self.g.describe()})"

    def inverse(self):
        return self.g

    def _eval(self, c):
        g = self.g
        lam = self.colouring
        n = g.dist_to_P0(c)
        limits.check_depth(n)
        if n == 0:
            return lam.member_with_colour(g.P0, self._f0inv[lam.colour(c, g.k)])
        i, d = g.closer(c, n)[0]
        e = self(d)
        for m in self.building.panel(e, i)[1]:
            if g(m) == c:
                return m
        raise EvaluationError(f"no preimage of {self.building.format(c)}")


class Recolouring(Automorphism):
    """The automorphism with ``λ ∘ g = φ ∘ λ`` sending ``source`` to ``target``.

    ``φ`` applies ``f[i]`` to the ``i``-colour; ``target`` must carry the
    recoloured colours of ``source``.
    """

    def __init__(self, colouring: LegalColouring, f, source: Chamber, target: Chamber):
        super().__init__(colouring)
        self.f = tuple(tuple(x) for x in f)
        self.source = source
        self.target = target
        lam = colouring
        want = tuple(self.f[i][lam.colour(source, i)] for i in range(lam.diagram.rank))
        if lam.vector(target) != want:
            raise ValueError(
                f"seed pair mismatch: λ(target) = {lam.vector(target)}, expected {want}"
            )

    def describe(self):
        fs = ",".join(pg.format_cycles(x) for x in self.f)
        b = self.building
        return f"recol[{fs}; {b.format(self.source)}->{b.format(self.target)}]"

    def inverse(self):
        return Recolouring(self.colouring, [pg.inverse(x) for x in self.f], self.target, self.source)

    def _eval(self, c):
        b = self.building
        lam = self.colouring
        n = b.word_dist(self.source, c)
        limits.check_depth(n)
        if n == 0:
            return self.target
        images = set()
        for i, d in b.neighbours(c):
            if b.word_dist(self.source, d) == n - 1:
                gd = self(d)
                images.add(lam.member_with_colour(b.panel(gd, i)[0], self.f[i][lam.colour(c, i)]))
        if len(images) != 1:
            raise EvaluationError(f"recolouring images of {b.format(c)} disagree: {images}")
        return images.pop()


class Compose(Automorphism):
    """``g ∘ h`` (apply ``h`` first)."""

    def __init__(self, g: Automorphism, h: Automorphism):
        super().__init__(g.colouring)
        self.g, self.h = g, h

    def describe(self):
        return f"{self.g.describe()} * {self.h.describe()}"

    def inverse(self):
        return Compose(self.h.inverse(), self.g.inverse())

    def _eval(self, c):
        return self.g(self.h(c))


class Inverse(Automorphism):
    """Generic inverse by search along a geodesic from the base chamber."""

    def __init__(self, g: Automorphism):
        super().__init__(g.colouring)
        self.g = g

    def inverse(self):
        return self.g

    def describe(self):
        return f"inv({self.g.describe()})"

    def _eval(self, c):
        # g^{-1}(base) is found by descending dist(g(x), base) greedily
        b = self.building
        g = self.g
        x = BASE
        dx = b.word_dist(g(x), c)
        while dx:
            for _, y in b.neighbours(x):
                dy = b.word_dist(g(y), c)
                if dy < dx:
                    x, dx = y, dy
                    break
            else:
                raise EvaluationError(f"no preimage of {b.format(c)}")
        return x


def compose(g: Automorphism, h: Automorphism) -> Automorphism:
    return Compose(g, h)


def invert(g: Automorphism) -> Automorphism:
    return g.inverse()


def apply(g: Automorphism, c: Chamber) -> Chamber:
    return g(c)


# construction entry points ---------------------------------------------------


def extend_local(colouring: LegalColouring, P0: ResidueRef, f0, F: LocalData) -> ExtensionSeed:
    return ExtensionSeed(colouring, P0, f0, F)


def recoloured_chamber(colouring: LegalColouring, f, c: Chamber = BASE) -> Chamber:
    """Walk from ``c`` panel by panel until each colour is ``f[i](λ_i(c))``."""
    b = colouring.building
    x = c
    for i in range(b.diagram.rank):
        x = colouring.member_with_colour(b.panel(x, i)[0], f[i][colouring.colour(c, i)])
    return x


def recolouring_aut(
    colouring: LegalColouring, f, F: LocalData, seed: tuple | None = None
) -> Recolouring:
    """Recolouring by ``f`` (a map type -> permutation), seeded at ``seed`` or the base."""
    diagram = colouring.diagram
    if isinstance(f, Mapping):
        f = [f.get(t, f.get(a, pg.identity(diagram.q[a]))) for a, t in enumerate(diagram.types)]
    f = [F.require(i, pg.check_perm(fi, diagram.q[i])) for i, fi in enumerate(f)]
    if seed is None:
        seed = (BASE, recoloured_chamber(colouring, f, BASE))
    return Recolouring(colouring, f, *seed)


def local_action(g: Automorphism, P: ResidueRef, F: LocalData | None = None) -> tuple:
    """Colour permutation induced by ``g`` from ``P`` to ``g·P``."""
    lam = g.colouring
    i = P.type
    perm = [None] * lam.diagram.q[i]
    for m in g.building.panel_members(P):
        perm[lam.colour(m, i)] = lam.colour(g(m), i)
    perm = tuple(perm)
    if F is not None:
        F.require(i, perm)
    return perm


def u_orbit_check(colouring: LegalColouring, c: Chamber, d: Chamber, F: LocalData):
    """A recolouring sending ``c`` to ``d`` if they are harmonious, else ``None``."""
    if not colouring.harmonious(c, d, F):
        return None
    if c == d:
        return Identity(colouring)
    n = colouring.diagram.rank
    f = [F.phi(i, colouring.colour(c, i), colouring.colour(d, i)) for i in range(n)]
    return Recolouring(colouring, f, c, d)


# audits ----------------------------------------------------------------------


@dataclass
class AuditReport:
    ok: bool = True
    chambers: int = 0
    panels: int = 0
    failures: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        if len(self.failures) < 20:
            self.failures.append(msg)


def audit(g: Automorphism, chambers: Iterable, F: LocalData, allowed=None) -> AuditReport:
    """Adjacency/type preservation and local-action membership on ``chambers``.

    ``allowed`` optionally maps a type to a stricter group that every local
    action must lie in (e.g. the plus-subgroups).
    """
    b = g.building
    lam = g.colouring
    S = set(chambers)
    rep = AuditReport()
    seen = set()
    for c in sorted(S, key=b.sort_key):
        rep.chambers += 1
        gc = g(c)
        for t in range(b.diagram.rank):
            P, members = b.panel(c, t)
            for m in members:
                if m != c and m in S and b.adjacency(gc, g(m)) != t:
                    rep.fail(f"{b.format(c)} ~{b.diagram.types[t]} {b.format(m)} not preserved")
            if P in seen or not set(members) <= S:
                continue
            seen.add(P)
            rep.panels += 1
            images = {g(m) for m in members}
            if len(images) != len(members):
                rep.fail(f"not injective on {b.format_panel(P)}")
                continue
            perm = local_action(g, P)
            if perm not in F.groups[t].elements:
                rep.fail(f"local action {pg.format_cycles(perm)} at {b.format_panel(P)} outside F")
            if allowed is not None and perm not in allowed[t].elements:
                rep.fail(f"local action {pg.format_cycles(perm)} at {b.format_panel(P)} outside the allowed group")
        if not lam.harmonious(c, gc, F):
            rep.fail(f"{b.format(c)} and its image are not harmonious")
    return rep


# U and U+ orbits --------------------------------------------------------------


def uplus_generators(colouring: LegalColouring, F: LocalData, spanning: Iterable) -> list[ExtensionSeed]:
    """Chamber-stabilising extension seeds at the panels of the ``spanning`` chambers."""
    b = colouring.building
    seen = set()
    out = []
    for c in sorted(set(spanning), key=b.sort_key):
        for i in range(b.diagram.rank):
            P = b.panel(c, i)[0]
            x = colouring.colour(c, i)
            for f in sorted(pg.point_stabilizer(F.groups[i], x).elements):
                if f == pg.identity(len(f)) or (P, f) in seen:
                    continue
                seen.add((P, f))
                out.append(ExtensionSeed(colouring, P, f, F))
    return out


def closure_in_region(start: Iterable, gens: Iterable[Automorphism], region: set) -> set:
    """Smallest set containing ``start`` and closed under ``gens`` (and inverses) inside ``region``."""
    cap = limits.get_limits().closure
    moves = []
    for g in gens:
        moves.append(g)
        moves.append(g.inverse())
    out = set(start)
    frontier = list(out)
    while frontier:
        nxt = []
        for c in frontier:
            for g in moves:
                d = g(c)
                if d in region and d not in out:
                    out.add(d)
                    nxt.append(d)
                    if len(out) > cap:
                        raise limits.LimitExceeded(f"orbit closure exceeded {cap} chambers")
        frontier = nxt
    return out


def uplus_orbit_on_ball(colouring: LegalColouring, c: Chamber, r: int, F: LocalData, gens=None) -> set:
    """Under-approximation of the ``U⁺``-orbit of ``c`` intersected with ``ball(base, r)``."""
    b = colouring.building
    region = set(b.ball(BASE, r))
    if c not in region:
        raise ValueError(f"{b.format(c)} lies outside ball(base, {r})")
    if gens is None:
        gens = uplus_generators(colouring, F, region)
    return closure_in_region([c], gens, region)


def harmony_classes(colouring: LegalColouring, chambers: Iterable, F: LocalData) -> dict:
    out: dict = {}
    for c in sorted(set(chambers), key=colouring.building.sort_key):
        out.setdefault(colouring.harmony_key(c, F), []).append(c)
    return out


def alternating_pair(colouring: LegalColouring, F: LocalData, j, k, start: Chamber = BASE):
    """Harmonious pair at distance 4 on an apartment whose colours alternate between orbits.

    Needs ``m_jk = inf`` and intransitive ``F_j`` and ``F_k``. Returns the
    gallery ``start = c_0, ..., c_4`` with alternating ``j``/``k`` steps.
    """
    b = colouring.building
    j, k = b.diagram.pos(j), b.diagram.pos(k)
    if b._comm[j][k] or j == k:
        raise ValueError("the two types must span an infinite edge")
    picks = {}
    for t in (j, k):
        orbs = F.orbits(t)
        if len(orbs) < 2:
            raise ValueError(f"local group of type {b.diagram.types[t]} is transitive")
        x0 = colouring.colour(start, t)
        here = next(o for o in orbs if x0 in o)
        there = next(o for o in orbs if o != here)
        picks[t] = (x0, min(there))
    chambers = [start]
    for step in range(4):
        t = j if step % 2 == 0 else k
        x0, x1 = picks[t]
        colour = x1 if step < 2 else x0
        chambers.append(colouring.member_with_colour(b.panel(chambers[-1], t)[0], colour))
    return chambers


# compact generation --------------------------------------------------------


@dataclass
class CompGenSets:
    transversals: tuple
    centre: Chamber
    B: list
    D: list
    T_pairs: list
    S_panels: list
    step1: bool = False
    step2: bool = False
    step3: bool = False
    region_size: int = 0
    reached: int = 0

    @property
    def ok(self) -> bool:
        return self.step1 and self.step2 and self.step3


def compgen_sets(colouring: LegalColouring, F: LocalData, check: bool = True) -> CompGenSets:
    """Finite data of the compact generating set, with a bounded reachability check.

    ``S`` uses, at each panel through ``B``, the extensions of the generators
    of ``F_i``; ``T`` uses one recolouring per equally coloured pair.
    """
    b = colouring.building
    n = b.diagram.rank
    if n < 2:
        raise ValueError("compact generation sets need rank >= 2")
    trans = tuple(frozenset(min(o) for o in F.orbits(i)) for i in range(n))

    def transversal_coloured(x):
        return all(colouring.colour(x, i) in trans[i] for i in range(n))

    centre = BASE  # λ(base) = 0, the least point of its orbit
    layers = b.spheres(centre, n + 1)
    ball_tilde = [x for layer in layers[: n + 1] for x in layer]
    B = [x for x in ball_tilde if transversal_coloured(x)]
    Bset = set(B)
    D_tilde = [x for x in layers[n + 1] if any(y in Bset for _, y in b.neighbours(x))]
    D = [x for x in D_tilde if transversal_coloured(x)]
    T_pairs = [
        (x, y) for x in B for y in B + D if colouring.vector(x) == colouring.vector(y)
    ]
    S_panels = []
    for x in B:
        for i in range(n):
            P = b.panel(x, i)[0]
            if P not in S_panels:
                S_panels.append(P)
    out = CompGenSets(trans, centre, B, D, T_pairs, S_panels)
    if not check:
        return out

    S = [
        ExtensionSeed(colouring, P, f, F)
        for P in S_panels
        for f in F.groups[P.type].gens
    ]
    T = [u_orbit_check(colouring, x, y, F) for x, y in T_pairs]
    region = set(b.ball(centre, n + 2))
    out.region_size = len(region)
    reach_S = closure_in_region(B, S, region)
    out.step1 = set(ball_tilde) <= reach_S
    reach_ST = closure_in_region(B, S + T, region)
    out.step2 = set(D_tilde) <= reach_ST
    out.step3 = region <= reach_ST
    out.reached = len(reach_ST)
    return out


def random_automorphism(colouring: LegalColouring, F: LocalData, rng: random.Random, radius: int = 2) -> Automorphism:
    """An extension seed or a recolouring with random data near the base."""
    b = colouring.building
    n = b.diagram.rank
    if rng.random() < 0.5:
        c = rng.choice(b.ball(BASE, radius))
        i = rng.randrange(n)
        f = rng.choice(F.groups[i].sorted_elements())
        return ExtensionSeed(colouring, b.panel(c, i)[0], f, F)
    f = [rng.choice(F.groups[i].sorted_elements()) for i in range(n)]
    return recolouring_aut(colouring, f, F)
