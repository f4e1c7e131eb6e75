"""Right-angled Coxeter diagrams with panel sizes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import limits

INF = math.inf


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Diagram:
    """A right-angled Coxeter diagram over ordered type labels.

    ``m[a][b]`` is 2 or ``INF`` for distinct positions ``a, b``; the diagonal
    holds 1. Colour set of type ``i`` is ``range(q[i])`` with 0 the base colour.
    Declaration order of ``types`` is the canonical order used downstream.
    """

    types: tuple[str, ...]
    m: tuple[tuple[float, ...], ...]
    q: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False)
    _commute: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.types)
        if len(set(self.types)) != n:
            raise DiagramError(f"duplicate type labels in {list(self.types)}")
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise DiagramError(f"m must be a {n}x{n} matrix")
        if len(self.q) != n:
            raise DiagramError(f"q must give one panel size per type ({n})")
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                if self.m[a][b] not in (2, INF):
                    raise DiagramError(
                        f"m[{self.types[a]}][{self.types[b]}]={self.m[a][b]!r}: "
                        "only 2 or inf allowed (right-angled diagrams)"
                    )
                if self.m[a][b] != self.m[b][a]:
                    raise DiagramError(f"m not symmetric at ({self.types[a]}, {self.types[b]})")
        for t, qi in zip(self.types, self.q):
            if not isinstance(qi, int) or qi < 2:
                raise DiagramError(f"q[{t}]={qi!r}: panel sizes must be integers >= 2")
        limits.check("rank", n)
        for qi in self.q:
            limits.check("q", qi)
        object.__setattr__(self, "_index", {t: a for a, t in enumerate(self.types)})
        object.__setattr__(
            self,
            "_commute",
            tuple(tuple(a != b and self.m[a][b] == 2 for b in range(n)) for a in range(n)),
        )

    # construction -----------------------------------------------------

    @classmethod
    def from_edges(
        cls, types: Sequence, q: Mapping | Sequence, inf_edges: Iterable[tuple] = ()
    ) -> "Diagram":
        """Build from the list of ``INF`` edges; every other pair commutes."""
        types = tuple(str(t) for t in types)
        idx = {t: a for a, t in enumerate(types)}
        n = len(types)
        m = [[1 if a == b else 2 for b in range(n)] for a in range(n)]
        for s, t in inf_edges:
            a, b = idx[str(s)], idx[str(t)]
            m[a][b] = m[b][a] = INF
        if isinstance(q, Mapping):
            qs = tuple(int(q[t] if t in q else q[int(t)]) for t in types)
        else:
            qs = tuple(int(v) for v in q)
        return cls(types, tuple(tuple(r) for r in m), qs)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Diagram":
        try:
            types = tuple(str(t) for t in data["types"])
            raw_m = data["m"]
            raw_q = data["q"]
        except KeyError as exc:
            raise DiagramError(f"diagram config missing key {exc.args[0]!r}") from None
        n = len(types)
        if len(raw_m) != n or any(len(row) != n for row in raw_m):
            raise DiagramError(f"'m' must be a {n}x{n} matrix matching 'types'")
        m = []
        for a, row in enumerate(raw_m):
            out = []
            for b, v in enumerate(row):
                if a == b:
                    out.append(1)
                elif isinstance(v, str) and v.lower() in ("inf", "infinity", "∞"):
                    out.append(INF)
                elif v == 2:
                    out.append(2)
                else:
                    raise DiagramError(
                        f"m[{types[a]}][{types[b]}]={v!r}: right-angled diagrams allow only 2 or \"inf\""
                    )
            m.append(tuple(out))
        if isinstance(raw_q, Mapping):
            missing = [t for t in types if t not in raw_q]
            if missing:
                raise DiagramError(f"'q' has no entry for type(s) {missing}")
            q = tuple(raw_q[t] for t in types)
        else:
            q = tuple(raw_q)
        return cls(types, tuple(m), q)

    def to_dict(self) -> dict:
        m = [
            [None if a == b else ("inf" if self.m[a][b] == INF else 2) for b in range(self.rank)]
            for a in range(self.rank)
        ]
        return {"types": list(self.types), "m": m, "q": dict(zip(self.types, self.q))}

    # basic accessors --------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.types)

    @property
    def thick(self) -> bool:
        return all(qi >= 3 for qi in self.q)

    def index(self, t) -> int:
        try:
            return self._index[str(t)]
        except KeyError:
            raise DiagramError(f"unknown type label {t!r}; known: {list(self.types)}") from None

    def pos(self, t) -> int:
        """Position of ``t``: ints are positions, anything else is a label."""
        if isinstance(t, int):
            if not 0 <= t < self.rank:
                raise DiagramError(f"type position {t} out of range")
            return t
        return self.index(t)

    def label(self, a: int) -> str:
        return self.types[a]

    def commutes(self, a: int, b: int) -> bool:
        """``True`` iff positions ``a != b`` have ``m = 2``."""
        return self._commute[a][b]

    def is_inf(self, s, t) -> bool:
        a, b = self.index(s), self.index(t)
        return a != b and self.m[a][b] == INF

    def inf_edges(self) -> list[tuple[str, str]]:
        return [
            (self.types[a], self.types[b])
            for a in range(self.rank)
            for b in range(a + 1, self.rank)
            if self.m[a][b] == INF
        ]

    def restrict(self, keep: Iterable) -> "Diagram":
        """Sub-diagram induced on ``keep`` (declaration order preserved)."""
        keep_idx = sorted(self.index(t) for t in keep)
        return Diagram(
            tuple(self.types[a] for a in keep_idx),
            tuple(tuple(self.m[a][b] for b in keep_idx) for a in keep_idx),
            tuple(self.q[a] for a in keep_idx),
        )

    # combinatorics ----------------------------------------------------

    def perp(self, k) -> frozenset[str]:
        a = self.index(k)
        return frozenset(self.types[b] for b in range(self.rank) if self._commute[a][b])

    def is_vertex_cover(self, cover: Iterable) -> bool:
        cover = {self.index(t) for t in cover}
        return all(
            a in cover or b in cover
            for a in range(self.rank)
            for b in range(a + 1, self.rank)
            if self.m[a][b] == INF
        )

    def is_irreducible(self) -> bool:
        if self.rank <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            a = stack.pop()
            for b in range(self.rank):
                if b not in seen and a != b and self.m[a][b] == INF:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == self.rank

    def is_spherical(self, J: Iterable) -> bool:
        J = sorted({self.index(t) for t in J})
        return all(self._commute[a][b] for i, a in enumerate(J) for b in J[i + 1:])


def tree(q=(3, 3)) -> Diagram:
    """Rank-2 diagram with ``m12 = inf`` (the building is a tree)."""
    return Diagram.from_edges(("1", "2"), q, [("1", "2")])


def path(q=(3, 3, 3)) -> Diagram:
    """Path 1-2-3: ``m12 = m23 = inf`` and ``m13 = 2``."""
    return Diagram.from_edges(("1", "2", "3"), q, [("1", "2"), ("2", "3")])


def triangle(q=(3, 3, 3)) -> Diagram:
    return Diagram.from_edges(("1", "2", "3"), q, [("1", "2"), ("2", "3"), ("1", "3")])
