"""Implosions: collapsing colour classes type by type onto a smaller building."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .chambers import BASE, Building, Chamber
from .colouring import LegalColouring
from .diagram import Diagram


class PartitionError(ValueError):
    pass


class ImplosionInconsistency(AssertionError):
    pass


def normalise_partition(blocks, q: int) -> tuple:
    """Blocks sorted by least element; must cover ``range(q)`` exactly once."""
    out = []
    seen: set = set()
    for blk in blocks:
        blk = frozenset(int(x) for x in blk)
        if not blk:
            raise PartitionError("empty class")
        if seen & blk:
            raise PartitionError(f"colour(s) {sorted(seen & blk)} appear in two classes")
        if any(not 0 <= x < q for x in blk):
            raise PartitionError(f"class {sorted(blk)} has colours outside 0..{q - 1}")
        seen |= blk
        out.append(blk)
    if seen != set(range(q)):
        raise PartitionError(f"classes miss colour(s) {sorted(set(range(q)) - seen)}")
    return tuple(sorted(out, key=min))


def discrete(q: int) -> tuple:
    return tuple(frozenset({x}) for x in range(q))


def universal_relation(q: int) -> tuple:
    return (frozenset(range(q)),)


def orbit_partitions(F) -> dict:
    return {i: tuple(F.orbits(i)) for i in range(F.diagram.rank)}


class Implosion:
    """The map ``τ`` pinned by ``τ(base) = base'``.

    Class indices follow the least element of each class, so the class of
    colour 0 has index 0 and the base chambers are compatible.
    """

    def __init__(self, colouring: LegalColouring, eqs: Mapping):
        self.colouring = colouring
        self.building: Building = colouring.building
        d = colouring.diagram
        parts = []
        for a, t in enumerate(d.types):
            blocks = eqs.get(t, eqs.get(a))
            parts.append(discrete(d.q[a]) if blocks is None else normalise_partition(blocks, d.q[a]))
        self.partitions = tuple(parts)
        self._class = tuple({x: k for k, blk in enumerate(p) for x in blk} for p in parts)
        self.kept = tuple(a for a, p in enumerate(parts) if len(p) > 1)
        self._target_pos = {a: k for k, a in enumerate(self.kept)}
        restricted = d.restrict([d.types[a] for a in self.kept])
        self.target_diagram = Diagram(
            restricted.types, restricted.m, tuple(len(parts[a]) for a in self.kept)
        )
        self.target = Building(self.target_diagram)
        self.target_colouring = LegalColouring(self.target)
        self._memo: dict = {BASE: BASE}

    def cls(self, i: int, x: int) -> int:
        return self._class[i][x]

    def rep(self, i: int, k: int) -> int:
        return min(self.partitions[i][k])

    def __call__(self, c: Chamber) -> Chamber:
        return self.tau(c)

    def tau(self, c: Chamber) -> Chamber:
        got = self._memo.get(c)
        if got is not None:
            return got
        stack = [c]
        b = self.building
        while stack:
            x = stack[-1]
            preds = [b.drop(x, p) for p in b.terminal_letters(x)]
            missing = [p for p in preds if p not in self._memo]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            if x not in self._memo:
                self._memo[x] = self._derive(x)
        return self._memo[c]

    def _derive(self, c: Chamber) -> Chamber:
        b = self.building
        lam = self.colouring
        images = set()
        for p in b.terminal_letters(c):
            i = c[p][0]
            d = b.drop(c, p)
            k = self.cls(i, lam.colour(c, i))
            if k == self.cls(i, lam.colour(d, i)):
                images.add(self._memo[d])
            else:
                t = self._target_pos[i]
                P = self.target.panel(self._memo[d], t)[0]
                images.add(self.target_colouring.member_with_colour(P, k))
        if len(images) != 1:
            raise ImplosionInconsistency(f"τ({b.format(c)}) derived as {sorted(images)}")
        return images.pop()

    def lift(self, gallery: Iterable[Chamber], start: Chamber = BASE) -> list:
        """Preimage gallery of a target gallery starting at ``τ(start)``."""
        gallery = list(gallery)
        if self.tau(start) != gallery[0]:
            raise ValueError("the lift must start in the fibre of the gallery's first chamber")
        tb = self.target
        out = [start]
        for a, z in zip(gallery, gallery[1:]):
            t = tb.adjacency(a, z)
            if t is None:
                raise ValueError("target gallery has non-adjacent consecutive chambers")
            i = self.kept[t]
            x = self.rep(i, self.target_colouring.colour(z, t))
            out.append(self.colouring.member_with_colour(self.building.panel(out[-1], i)[0], x))
        return out

    def push(self, g, chambers: Iterable) -> dict:
        """The induced map on ``τ``-images; must be well defined on fibres."""
        out: dict = {}
        for d in chambers:
            a, z = self.tau(d), self.tau(g(d))
            if out.setdefault(a, z) != z:
                raise ImplosionInconsistency(
                    f"automorphism does not respect the fibre of {self.target.format(a)}"
                )
        return out


def build_implosion(colouring: LegalColouring, eqs: Mapping) -> Implosion:
    return Implosion(colouring, eqs)


@dataclass
class ImplosionReport:
    radius: int
    ok: bool = True
    chambers: int = 0
    pairs: int = 0
    target_ball: int = 0
    failures: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        if len(self.failures) < 20:
            self.failures.append(msg)


def verify_implosion(imp: Implosion, r: int, exhaustive_pairs: int = 200) -> ImplosionReport:
    """Colour compatibility, nonexpansiveness and surjectivity on balls of radius ``r``.

    Nonexpansiveness is checked on all pairs when the ball has at most
    ``exhaustive_pairs`` chambers, else on adjacent pairs.
    """
    b, tb = imp.building, imp.target
    lam, lam2 = imp.colouring, imp.target_colouring
    rep = ImplosionReport(radius=r)
    ball = b.ball(BASE, r)
    rep.chambers = len(ball)
    for c in ball:
        tc = imp.tau(c)
        for t, i in enumerate(imp.kept):
            if lam2.colour(tc, t) != imp.cls(i, lam.colour(c, i)):
                rep.fail(f"colour of τ({b.format(c)}) in type {b.diagram.types[i]} is wrong")
    if len(ball) <= exhaustive_pairs:
        pairs = [(c, d) for a, c in enumerate(ball) for d in ball[a + 1:]]
    else:
        inside = set(ball)
        pairs = [(c, d) for c in ball for _, d in b.neighbours(c) if d in inside and c < d]
    for c, d in pairs:
        rep.pairs += 1
        if tb.word_dist(imp.tau(c), imp.tau(d)) > b.word_dist(c, d):
            rep.fail(f"τ expands the distance between {b.format(c)} and {b.format(d)}")
    target_ball = tb.ball(BASE, r)
    rep.target_ball = len(target_ball)
    for z in target_ball:
        path = [tb.normal_form(z[:k]) for k in range(len(z) + 1)]
        lifted = imp.lift(path)
        if [imp.tau(x) for x in lifted] != path:
            rep.fail(f"lift of the gallery to {tb.format(z)} does not map back")
    image = {imp.tau(c) for c in ball}
    if not set(target_ball) <= image:
        rep.fail("ball of the target is not covered by the image of the source ball")
    return rep


@dataclass
class StabilityReport:
    radius: int
    generators: int
    ok: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)


def fibre_stability(imp: Implosion, gens, r: int) -> StabilityReport:
    """``τ(g·d) = τ(d)`` for every generator and every ``d`` in ``ball(base, r)``."""
    b = imp.building
    gens = list(gens)
    rep = StabilityReport(radius=r, generators=len(gens))
    ball = b.ball(BASE, r)
    for g in gens:
        for d in ball:
            rep.checked += 1
            if imp.tau(g(d)) != imp.tau(d):
                rep.ok = False
                if len(rep.failures) < 20:
                    rep.failures.append(f"{g.describe()} moves {b.format(d)} across fibres")
                break
    return rep


def parse_classes(text: str, diagram) -> dict:
    """``"1:0|1,2;2:*"``: per type, ``|`` separates classes and ``*`` is the universal relation."""
    out: dict = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        label, sep, body = item.partition(":")
        if not sep:
            raise PartitionError(f"bad class spec {item!r}; expected type:classes")
        a = diagram.index(label.strip())
        q = diagram.q[a]
        body = body.strip()
        if body == "*":
            out[diagram.types[a]] = universal_relation(q)
            continue
        try:
            blocks = [[int(x) for x in blk.split(",") if x.strip()] for blk in body.split("|")]
        except ValueError:
            raise PartitionError(f"bad colour in {item!r}") from None
        out[diagram.types[a]] = normalise_partition(blocks, q)
    return out
