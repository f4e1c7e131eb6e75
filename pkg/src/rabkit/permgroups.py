"""Finite permutation groups by explicit element enumeration.

Permutations are tuples of images on ``range(n)``; ``compose(g, h)`` is
``g ∘ h`` (apply ``h`` first).
"""
from __future__ import annotations

import itertools
import re
from functools import cached_property

from . import limits

Perm = tuple


class PermError(ValueError):
    pass


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(g: Perm, h: Perm) -> Perm:
    return tuple(g[x] for x in h)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for x, y in enumerate(g):
        out[y] = x
    return tuple(out)


def check_perm(g, n: int) -> Perm:
    g = tuple(int(x) for x in g)
    if len(g) != n or sorted(g) != list(range(n)):
        raise PermError(f"{list(g)} is not a permutation of degree {n}")
    return g


def parse_cycles(text: str, n: int) -> Perm:
    """``"(0 1)(2 3)"`` or ``"()"`` to an image tuple of degree ``n``."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\))*", text):
        raise PermError(f"cannot parse cycle notation {text!r}")
    g = list(range(n))
    seen: set = set()
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
        if any(p >= n for p in pts):
            raise PermError(f"cycle {body!r} mentions a point >= degree {n}")
        if seen & set(pts) or len(set(pts)) != len(pts):
            raise PermError(f"cycles in {text!r} are not disjoint")
        seen |= set(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            g[a] = b
    return tuple(g)


def format_cycles(g: Perm) -> str:
    seen = set()
    out = []
    for x in range(len(g)):
        if x in seen or g[x] == x:
            continue
        cyc = [x]
        seen.add(x)
        y = g[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = g[y]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


class PermGroup:
    """Subgroup of ``Sym({0..n-1})`` generated by ``gens``."""

    def __init__(self, n: int, gens=()):
        self.n = n
        gens = [check_perm(g, n) for g in gens]
        self.gens = tuple(sorted({g for g in gens if g != identity(n)}))

    def __repr__(self):
        gens = ", ".join(format_cycles(g) for g in self.gens) or "()"
        return f"PermGroup({self.n}, <{gens}>)"

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.n == other.n and self.elements == other.elements

    def __hash__(self):
        return hash((self.n, self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.elements

    @cached_property
    def elements(self) -> frozenset:
        cap = limits.get_limits().elements
        e = identity(self.n)
        elems = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.gens:
                    y = compose(g, x)
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
                        if len(elems) > cap:
                            raise limits.LimitExceeded(f"group order exceeds element cap {cap}")
            frontier = nxt
        return frozenset(elems)

    def sorted_elements(self) -> list:
        return sorted(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return not self.gens

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.n == other.n and all(g in other.elements for g in self.gens)


def symmetric(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens.append(parse_cycles("(0 1)", n))
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    return PermGroup(n, gens)


def cyclic(n: int) -> PermGroup:
    return PermGroup(n, [tuple(list(range(1, n)) + [0])] if n >= 2 else [])


def trivial(n: int) -> PermGroup:
    return PermGroup(n)


def orbits(G: PermGroup) -> list[frozenset]:
    """Orbits by union-find over generator images, ordered by least point."""
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.gens:
        for x in range(G.n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes: dict = {}
    for x in range(G.n):
        classes.setdefault(find(x), set()).add(x)
    return sorted((frozenset(v) for v in classes.values()), key=min)


def orbit_of(G: PermGroup, x: int) -> frozenset:
    return next(o for o in orbits(G) if x in o)


def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G)) == 1


def point_stabilizer(G: PermGroup, x: int) -> PermGroup:
    return PermGroup(G.n, [g for g in G.elements if g[x] == x])


def plus_subgroup(G: PermGroup) -> PermGroup:
    """Subgroup generated by all point stabilisers."""
    return PermGroup(G.n, [g for g in G.elements if any(g[x] == x for x in range(G.n))])


def is_free(G: PermGroup) -> bool:
    e = identity(G.n)
    return all(g == e or all(g[x] != x for x in range(G.n)) for g in G.elements)


def free_witness(G: PermGroup) -> Perm | None:
    """A non-trivial element fixing a point, or ``None`` if the action is free."""
    e = identity(G.n)
    for g in sorted(G.elements):
        if g != e and any(g[x] == x for x in range(G.n)):
            return g
    return None


def is_regular(G: PermGroup) -> bool:
    return is_free(G) and is_transitive(G)


def transversal(G: PermGroup, x: int, y: int) -> Perm:
    """Least element sending ``x`` to ``y`` (the identity when ``x == y``)."""
    if x == y:
        return identity(G.n)
    cands = [g for g in G.elements if g[x] == y]
    if not cands:
        raise PermError(f"{x} and {y} lie in different orbits")
    return min(cands)


# primitivity -----------------------------------------------------------


def block_closure(G: PermGroup, seed) -> frozenset:
    """Least block containing ``seed`` (merging images that meet)."""
    # union-find: join g(seed) with seed's class whenever they intersect
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[max(a, b)] = min(a, b)
            return True
        return False

    seed = sorted(seed)
    for p in seed[1:]:
        union(seed[0], p)
    changed = True
    while changed:
        changed = False
        for g in G.gens:
            for x in range(G.n):
                for y in range(G.n):
                    if x < y and find(x) == find(y) and union(g[x], g[y]):
                        changed = True
    root = find(seed[0])
    return frozenset(x for x in range(G.n) if find(x) == root)


def block_system(G: PermGroup, block) -> list[frozenset]:
    out = {frozenset(g[x] for x in block) for g in G.elements}
    return sorted(out, key=min)


def nontrivial_block(G: PermGroup) -> frozenset | None:
    """A block of size strictly between 1 and n, if any (minimal-block search)."""
    for y in range(1, G.n):
        B = block_closure(G, (0, y))
        if len(B) < G.n:
            return B
    return None


def orbital_graphs(G: PermGroup) -> list[frozenset]:
    """Orbits of ``G`` on ordered pairs, the diagonal first."""
    pairs = set(itertools.product(range(G.n), repeat=2))
    out = []
    while pairs:
        x, y = min(pairs)
        orb = frozenset((g[x], g[y]) for g in G.elements)
        out.append(orb)
        pairs -= orb
    return out


def _weakly_connected(n: int, edges) -> bool:
    adj = {x: set() for x in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    return len(seen) == n


def is_primitive(G: PermGroup, method: str = "blocks") -> bool:
    """Transitive with no non-trivial block.

    ``method="blocks"`` searches minimal blocks; ``method="higman"`` checks
    that every non-diagonal orbital graph is connected.
    """
    if not is_transitive(G):
        return False
    if G.n <= 2:
        return True
    if method == "blocks":
        return nontrivial_block(G) is None
    if method == "higman":
        return all(
            _weakly_connected(G.n, orb)
            for orb in orbital_graphs(G)
            if any(a != b for a, b in orb)
        )
    raise ValueError(f"unknown primitivity method {method!r}")


def fix_move_witness(G: PermGroup, x: int, y: int) -> Perm:
    """Element fixing ``x`` and moving ``y`` in a primitive non-regular group."""
    if x == y:
        raise PermError("x and y must differ")
    if not is_primitive(G):
        raise PermError("group is not primitive")
    if is_regular(G):
        raise PermError("group is regular")
    for g in sorted(G.elements):
        if g[x] == x and g[y] != y:
            return g
    raise PermError(f"no element fixes {x} and moves {y}")


def all_subgroups(n: int) -> list[PermGroup]:
    """Every subgroup of ``Sym(n)`` (small ``n``), by closing under joins."""
    S = symmetric(n)
    cyclics = {PermGroup(n, [g]) for g in S.elements}
    found = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        nxt = set()
        for H in frontier:
            for C in cyclics:
                if C.gens and not C.is_subgroup_of(H):
                    J = PermGroup(n, H.gens + C.gens)
                    if J not in found:
                        nxt.add(J)
        found |= nxt
        frontier = nxt
    return sorted(found, key=lambda H: (H.order, sorted(H.elements)))
