"""Galleries, distances, projections, parallelism, squares and convexity."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import limits
from .chambers import BASE, Building, Chamber, PanelRef, ResidueRef


class GalleryError(ValueError):
    pass


class PreconditionError(ValueError):
    """A lemma's hypotheses do not hold for the given chambers."""


class LemmaViolation(AssertionError):
    """A lemma's conclusion failed on inputs that satisfy its hypotheses."""


@dataclass(frozen=True)
class Gallery:
    chambers: tuple
    types: tuple

    def __len__(self):
        return len(self.types)

    @property
    def start(self) -> Chamber:
        return self.chambers[0]

    @property
    def end(self) -> Chamber:
        return self.chambers[-1]


def make_gallery(building: Building, chambers) -> Gallery:
    chambers = tuple(chambers)
    if not chambers:
        raise GalleryError("a gallery needs at least one chamber")
    types = []
    for a, b in zip(chambers, chambers[1:]):
        t = building.adjacency(a, b)
        if t is None:
            raise GalleryError(
                f"{building.format(a)} and {building.format(b)} are not adjacent (or equal)"
            )
        types.append(t)
    return Gallery(chambers, tuple(types))


def gallery_from_steps(building: Building, letters, start: Chamber = BASE) -> Gallery:
    """Walk from ``start``; each letter ``(t, x)`` moves inside the current ``t``-panel."""
    chambers = [start]
    for t, x in letters:
        chambers.append(building.step(chambers[-1], t, x))
    return make_gallery(building, chambers)


def walk(building: Building, c: Chamber, d: Chamber) -> Gallery:
    """Concatenation of the descent ``c -> base`` with the ascent ``base -> d``."""
    down = [c]
    while down[-1]:
        x = down[-1]
        down.append(building.drop(x, len(x) - 1))
    up = [building.normal_form(d[:k]) for k in range(1, len(d) + 1)]
    return make_gallery(building, down + up)


def _square_corner(building: Building, a: Chamber, c: Chamber, s: int, t: int) -> Chamber:
    # a ~s b ~t c with m_st = 2; return the fourth corner e with a ~t e ~s c
    for e in building.panel(a, t)[1]:
        if e != a and building.adjacency(e, c) == s:
            return e
    raise LemmaViolation(
        f"no square corner for {building.format(a)} -> {building.format(c)}"
    )


def reduce_gallery(building: Building, g: Gallery) -> Gallery:
    """Shorten ``g`` to a minimal gallery with the same endpoints.

    Applies elementary contractions (two consecutive steps inside one panel
    merge, or cancel on a backtrack) and elementary homotopies (an ``st``
    corner of a square becomes ``ts`` when ``m_st = 2``) until no two equal
    types can be brought together, i.e. until the type word is reduced.
    """
    ch = list(g.chambers)
    ty = list(g.types)
    comm = building._comm
    while True:
        # contractions
        k = 0
        contracted = False
        while k + 1 < len(ty):
            if ty[k] == ty[k + 1]:
                if ch[k] == ch[k + 2]:
                    del ch[k + 1:k + 3]
                    del ty[k:k + 2]
                else:
                    del ch[k + 1]
                    del ty[k + 1]
                contracted = True
                k = max(k - 1, 0)
            else:
                k += 1
        # find two equal types separated only by commuting steps
        pair = None
        for p in range(len(ty)):
            t = ty[p]
            for r in range(p + 1, len(ty)):
                if ty[r] == t:
                    pair = (p, r)
                    break
                if not comm[t][ty[r]]:
                    break
            if pair:
                break
        if pair is None:
            if not contracted:
                break
            continue
        p, r = pair
        # move step r left until it sits right after step p
        for s in range(r - 1, p, -1):
            a, b = ty[s], ty[s + 1]
            ch[s + 1] = _square_corner(building, ch[s], ch[s + 2], a, b)
            ty[s], ty[s + 1] = b, a
    return Gallery(tuple(ch), tuple(ty))


def weyl_word(building: Building, types) -> tuple:
    """Canonical representative (type labels) of a reduced type word."""
    canon = building._canonical(tuple((t, 1) for t in types))
    return tuple(building.diagram.types[t] for t, _ in canon)


@lru_cache(maxsize=None)
def _reduced_walk(building: Building, c: Chamber, d: Chamber) -> Gallery:
    return reduce_gallery(building, walk(building, c, d))


def dist(building: Building, c: Chamber, d: Chamber) -> int:
    """Gallery distance, computed by reducing the walk through the base."""
    return len(_reduced_walk(building, c, d))


def weyl_delta(building: Building, c: Chamber, d: Chamber) -> tuple:
    return weyl_word(building, _reduced_walk(building, c, d).types)


def is_reduced_type_word(building: Building, types) -> bool:
    """Right-angled Coxeter word problem: no equal pair separated by commuting letters."""
    comm = building._comm
    for p, t in enumerate(types):
        for s in types[p + 1:]:
            if s == t:
                return False
            if not comm[t][s]:
                break
    return True


# projections -----------------------------------------------------------


def proj_panel(building: Building, P: ResidueRef, c: Chamber) -> Chamber:
    members = building.panel_members(P)
    ds = [building.word_dist(c, m) for m in members]
    best = min(ds)
    if ds.count(best) != 1:
        raise LemmaViolation(f"projection onto {building.format_panel(P)} not unique")
    return members[ds.index(best)]


def proj_residue(building: Building, R: ResidueRef, c: Chamber) -> Chamber:
    """Gate of ``c`` in ``R`` by greedy descent from ``R``'s own gate."""
    x = R.gate
    dx = building.word_dist(c, x)
    improved = True
    while improved:
        improved = False
        for t in sorted(R.J):
            for m in building.panel(x, t)[1]:
                dm = building.word_dist(c, m)
                if dm < dx:
                    x, dx = m, dm
                    improved = True
                    break
            if improved:
                break
    return x


def wall(building: Building, P: ResidueRef) -> ResidueRef:
    """The ``(k ∪ k^⊥)``-residue containing the ``k``-panel ``P``."""
    k = P.type
    J = {k} | {s for s in range(building.diagram.rank) if building._comm[k][s]}
    return building.residue(P.gate, J)


def are_parallel(building: Building, P: ResidueRef, Q: ResidueRef) -> bool:
    return P.J == Q.J and wall(building, P) == wall(building, Q)


def are_parallel_by_projection(building: Building, P: ResidueRef, Q: ResidueRef) -> bool:
    """Mutual full projections (the defining property)."""
    mp, mq = set(building.panel_members(P)), set(building.panel_members(Q))
    return {proj_panel(building, P, c) for c in mq} == mp and {
        proj_panel(building, Q, c) for c in mp
    } == mq


# closing squares -------------------------------------------------------


def _expect(building, c0, x, n, name):
    got = building.word_dist(c0, x)
    if got != n:
        raise PreconditionError(f"dist(c0, {name}) = {got}, expected {n}")


def close_square(building: Building, c0: Chamber, d1: Chamber, c: Chamber, d2: Chamber) -> Chamber:
    """First case: ``d1 ~i c ~j d2`` one step further from ``c0``; returns ``e``.

    ``e`` satisfies ``d1 ~j e ~i d2`` and ``dist(c0, e) = n - 1``.
    """
    i, j = building.adjacency(d1, c), building.adjacency(c, d2)
    if i is None or j is None:
        raise PreconditionError("d1 ~ c ~ d2 must be adjacent pairs")
    if i == j:
        raise PreconditionError("the two adjacencies must have distinct types i != j")
    n = building.word_dist(c0, c) - 1
    if n < 0:
        raise PreconditionError("c must differ from c0")
    _expect(building, c0, d1, n, "d1")
    _expect(building, c0, d2, n, "d2")
    if not building._comm[i][j]:
        raise LemmaViolation("closing squares forces m_ij = 2")
    for e in building.panel(d1, j)[1]:
        if building.adjacency(e, d2) == i and building.word_dist(c0, e) == n - 1:
            return e
    raise LemmaViolation("no closing chamber e found")


def close_square_outer(
    building: Building, c0: Chamber, d1: Chamber, c1: Chamber, c2: Chamber
) -> Chamber:
    """Second case: ``d1 ~i c1 ~j c2`` with ``c1, c2`` one step further; returns ``d2``."""
    i, j = building.adjacency(d1, c1), building.adjacency(c1, c2)
    if i is None or j is None:
        raise PreconditionError("d1 ~ c1 ~ c2 must be adjacent pairs")
    if i == j:
        raise PreconditionError("the two adjacencies must have distinct types i != j")
    n = building.word_dist(c0, d1)
    _expect(building, c0, c1, n + 1, "c1")
    _expect(building, c0, c2, n + 1, "c2")
    if not building._comm[i][j]:
        raise LemmaViolation("closing squares forces m_ij = 2")
    for d2 in building.panel(d1, j)[1]:
        if building.adjacency(d2, c2) == i and building.word_dist(c0, d2) == n:
            return d2
    raise LemmaViolation("no closing chamber d2 found")


# convexity -------------------------------------------------------------


def interval(building: Building, c: Chamber, d: Chamber) -> set:
    """Chambers lying on some minimal gallery from ``c`` to ``d``."""
    wd = building.word_dist
    out = {c}
    layer = {c}
    k = wd(c, d)
    while k > 0:
        nxt = set()
        for x in layer:
            for _, y in building.neighbours(x):
                if wd(y, d) == k - 1:
                    nxt.add(y)
        out |= nxt
        layer = nxt
        k -= 1
    return out


def minimal_galleries(building: Building, c: Chamber, d: Chamber) -> list[Gallery]:
    """Every minimal gallery from ``c`` to ``d`` (capped by the gallery limit)."""
    cap = limits.get_limits().galleries
    wd = building.word_dist
    out: list[list] = []

    def descend(path):
        x = path[-1]
        k = wd(x, d)
        if k == 0:
            out.append(list(path))
            if len(out) > cap:
                raise limits.LimitExceeded(f"more than {cap} minimal galleries between the pair")
            return
        for _, y in building.neighbours(x):
            if wd(y, d) == k - 1:
                path.append(y)
                descend(path)
                path.pop()

    descend([c])
    return [make_gallery(building, p) for p in out]


def is_convex(building: Building, S) -> bool:
    S = set(S)
    items = sorted(S, key=building.sort_key)
    for a, c in enumerate(items):
        for d in items[a + 1:]:
            if not interval(building, c, d) <= S:
                return False
    return True


def convex_closure(building: Building, S) -> set:
    cap = limits.get_limits().closure
    closed = set(S)
    done: set = set()
    while True:
        items = sorted(closed, key=building.sort_key)
        added = set()
        for a, c in enumerate(items):
            for d in items[a + 1:]:
                if (c, d) in done:
                    continue
                done.add((c, d))
                added |= interval(building, c, d) - closed
        if not added:
            return closed
        closed |= added
        if len(closed) > cap:
            raise limits.LimitExceeded(f"convex closure exceeded {cap} chambers")


# wings -----------------------------------------------------------------


def find_wing_panel(colouring, Phi, i, x: int) -> tuple[ResidueRef, Chamber]:
    """An ``i``-panel onto which all of ``Phi`` projects to one chamber of colour ``x``.

    Needs a type ``j`` with ``m_ij = inf``. Works inside the ``{i, j}``-tree
    residue of the first chamber: walk a geodesic ray out of the ball that
    holds the projections, then adjust the colour with one ``j``-step.
    """
    building = colouring.building
    diagram = building.diagram
    i = diagram.pos(i)
    Phi = sorted(set(Phi), key=building.sort_key)
    if not Phi:
        raise ValueError("Phi must be non-empty")
    js = [j for j in range(diagram.rank) if j != i and not building._comm[i][j]]
    if not js:
        raise PreconditionError(f"type {diagram.types[i]} is an isolated node of the diagram")
    j = js[0]
    R = building.residue(Phi[0], {i, j})
    projs = [proj_residue(building, R, phi) for phi in Phi]
    r0 = projs[0]
    rho = max(building.word_dist(r0, p) for p in projs)
    length = rho + 1
    t = j if length % 2 else i
    w = r0
    for _ in range(length):
        w = next(m for m in building.panel(w, t)[1] if m != w)
        t = i if t == j else j
    P0 = building.panel(w, i)[0]
    if colouring.colour(w, i) == x:
        c = w
    else:
        y = next(m for m in building.panel_members(P0) if colouring.colour(m, i) == x)
        c = next(m for m in building.panel(y, j)[1] if m != y)
    P = building.panel(c, i)[0]
    for phi in Phi:
        if proj_panel(building, P, phi) != c:
            raise LemmaViolation(f"{building.format(phi)} does not project onto the wing chamber")
    if colouring.colour(c, i) != x:
        raise LemmaViolation("wing chamber has the wrong colour")
    return P, c
