"""Chambers of the semiregular right-angled building as coloured words.

A chamber is a reduced word of letters ``(type_position, colour)`` with
``colour != 0``, stored in canonical (lexicographically least) form among all
words reachable by swapping adjacent commuting letters. Colour 0 stands for
"the panel member closest to the base chamber", so it never appears in a
stored word. The base chamber is the empty word.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import limits
from .diagram import Diagram

Letter = tuple  # (type_position, colour)
Chamber = tuple  # tuple of Letters in canonical form

BASE: Chamber = ()


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class ResidueRef:
    """A residue named by its type set (positions) and its gate.

    The gate is the member of minimal word length, i.e. the projection of
    the base chamber.
    """

    J: frozenset
    gate: Chamber

    @property
    def is_panel(self) -> bool:
        return len(self.J) == 1

    @property
    def type(self) -> int:
        (t,) = self.J
        return t


def PanelRef(t: int, gate: Chamber) -> ResidueRef:
    return ResidueRef(frozenset((t,)), gate)


class Building:
    """On-demand model of the building attached to ``diagram``."""

    def __init__(self, diagram: Diagram):
        self.diagram = diagram
        n = diagram.rank
        self._comm = tuple(tuple(diagram.commutes(a, b) for b in range(n)) for a in range(n))
        self._cache_nf = lru_cache(maxsize=None)(self._canonical)
        self._cache_panel = lru_cache(maxsize=None)(self._panel)
        self._cache_dist = lru_cache(maxsize=None)(self._word_dist)

    def __repr__(self):
        return f"Building({self.diagram.types}, q={self.diagram.q})"

    # word utilities ---------------------------------------------------

    def _check_letter(self, letter) -> None:
        t, x = letter
        if not (0 <= t < self.diagram.rank):
            raise WordError(f"unknown type position {t}")
        if not (0 <= x < self.diagram.q[t]):
            raise WordError(
                f"colour {x} out of range for type {self.diagram.types[t]} (q={self.diagram.q[t]})"
            )

    def _terminal(self, word: Sequence, t: int) -> int | None:
        """Position of a letter of type ``t`` that can be moved to the end."""
        comm = self._comm[t]
        for p in range(len(word) - 1, -1, -1):
            s = word[p][0]
            if s == t:
                return p
            if not comm[s]:
                return None
        return None

    def _canonical(self, word: tuple) -> Chamber:
        rest = list(word)
        out = []
        comm = self._comm
        while rest:
            best = None
            blockers: list[int] = []
            for p, letter in enumerate(rest):
                t = letter[0]
                if all(comm[s][t] for s in blockers):
                    if best is None or letter < rest[best]:
                        best = p
                blockers.append(t)
            out.append(rest.pop(best))
        return tuple(out)

    def _push(self, word: list, letter) -> None:
        """Append ``letter`` with the merge rule (in place, not canonical)."""
        t, x = letter
        p = self._terminal(word, t)
        if p is None:
            if x != 0:
                word.append((t, x))
        elif x == 0:
            del word[p]
        else:
            word[p] = (t, x)

    def normal_form(self, letters: Iterable) -> Chamber:
        """Canonical chamber of an arbitrary letter sequence.

        Rules: ``(i,x)(i,y) -> (i,y)``, commuting neighbours may swap, and a
        colour-0 letter deletes the movable letter of its type (or vanishes).
        """
        word: list = []
        for letter in letters:
            letter = (int(letter[0]), int(letter[1]))
            self._check_letter(letter)
            self._push(word, letter)
        return self._cache_nf(tuple(word))

    def is_canonical(self, word: Sequence) -> bool:
        return tuple(word) == self.normal_form(word)

    def step(self, c: Chamber, t: int, x: int) -> Chamber:
        """The member of ``c``'s ``t``-panel with intrinsic colour ``x``."""
        word = list(c)
        self._push(word, (t, x))
        return self._cache_nf(tuple(word))

    def intrinsic(self, c: Chamber, t: int) -> int:
        p = self._terminal(c, t)
        return 0 if p is None else c[p][1]

    def terminal_letters(self, c: Chamber) -> list[int]:
        """Positions of letters that can be moved to the end of ``c``."""
        out = []
        for p, (t, _) in enumerate(c):
            if all(self._comm[t][s] for s, _ in c[p + 1:]):
                out.append(p)
        return out

    def drop(self, c: Chamber, p: int) -> Chamber:
        return self._cache_nf(c[:p] + c[p + 1:])

    # panels and residues ----------------------------------------------

    def _panel(self, c: Chamber, t: int):
        p = self._terminal(c, t)
        gate = c if p is None else self._cache_nf(c[:p] + c[p + 1:])
        members = (gate,) + tuple(self.step(gate, t, y) for y in range(1, self.diagram.q[t]))
        return PanelRef(t, gate), members

    def panel(self, c: Chamber, t: int) -> tuple[ResidueRef, tuple]:
        """``(PanelRef, members)``; members are ordered by intrinsic colour."""
        return self._cache_panel(c, t)

    def panel_members(self, P: ResidueRef) -> tuple:
        return self._cache_panel(P.gate, P.type)[1]

    def residue_gate(self, c: Chamber, J: Iterable[int]) -> Chamber:
        J = frozenset(J)
        word = list(c)
        changed = True
        while changed:
            changed = False
            for t in J:
                p = self._terminal(word, t)
                if p is not None:
                    del word[p]
                    changed = True
        return self._cache_nf(tuple(word))

    def residue(self, c: Chamber, J: Iterable[int]) -> ResidueRef:
        J = frozenset(J)
        return ResidueRef(J, self.residue_gate(c, J))

    def in_residue(self, c: Chamber, R: ResidueRef) -> bool:
        return self.residue_gate(c, R.J) == R.gate

    def residue_members(self, R: ResidueRef, radius: int | None = None) -> list:
        """Chambers of ``R`` within ``radius`` of its gate (all, if spherical)."""
        if radius is None:
            if not self.diagram.is_spherical([self.diagram.types[t] for t in R.J]):
                raise limits.LimitExceeded("non-spherical residue is infinite; pass a radius")
            radius = len(R.J)
        seen = {R.gate}
        layer = [R.gate]
        for _ in range(radius):
            nxt = []
            for c in layer:
                for t in sorted(R.J):
                    for d in self.panel(c, t)[1]:
                        if d not in seen:
                            seen.add(d)
                            nxt.append(d)
            layer = nxt
        return sorted(seen, key=self.sort_key)

    # adjacency and enumeration ----------------------------------------

    def adjacency(self, c: Chamber, d: Chamber) -> int | None:
        if c == d:
            return None
        for t in range(self.diagram.rank):
            if self.panel(c, t)[0] == self.panel(d, t)[0]:
                return t
        return None

    def neighbours(self, c: Chamber) -> Iterator[tuple[int, Chamber]]:
        for t in range(self.diagram.rank):
            for d in self.panel(c, t)[1]:
                if d != c:
                    yield t, d

    @staticmethod
    def sort_key(c: Chamber):
        return (len(c), c)

    def ball(self, c: Chamber = BASE, r: int = 1) -> list:
        """All chambers within gallery distance ``r`` of ``c``, in BFS order."""
        limits.check("radius", r)
        return [d for layer in self.spheres(c, r) for d in layer]

    def spheres(self, c: Chamber, r: int) -> list[list]:
        seen = {c}
        layers = [[c]]
        for _ in range(r):
            nxt = set()
            for d in layers[-1]:
                for _, e in self.neighbours(d):
                    if e not in seen:
                        nxt.add(e)
            seen |= nxt
            layers.append(sorted(nxt, key=self.sort_key))
        return layers

    # distance ---------------------------------------------------------

    def _word_dist(self, c: Chamber, d: Chamber) -> int:
        # reduce c^{-1} d in the graph product of cyclic groups Z/q_i
        q = self.diagram.q
        word: list = []
        for t, x in [(t, -x) for t, x in reversed(c)] + list(d):
            p = self._terminal(word, t)
            if p is None:
                word.append((t, x))
            else:
                y = (word[p][1] + x) % q[t]
                if y == 0:
                    del word[p]
                else:
                    word[p] = (t, y)
        return len(word)

    def word_dist(self, c: Chamber, d: Chamber) -> int:
        """Gallery distance via word reduction (fast path, memoized)."""
        if c > d:
            c, d = d, c
        return self._cache_dist(c, d)

    def dist_to_panel(self, c: Chamber, P: ResidueRef) -> int:
        return min(self.word_dist(c, m) for m in self.panel_members(P))

    # literals ---------------------------------------------------------

    def parse_word(self, text: str) -> Chamber:
        """Parse ``"1:2,2:1"`` (type label ``:`` colour); ``""``/``"e"`` is the base."""
        return self.normal_form(self.parse_letters(text))

    def parse_letters(self, text: str) -> list:
        text = text.strip()
        if text in ("", "e", "ε", "()"):
            return []
        out = []
        for item in text.split(","):
            label, sep, colour = item.strip().rpartition(":")
            if not sep:
                raise WordError(f"bad letter {item!r}; expected type:colour")
            try:
                x = int(colour)
            except ValueError:
                raise WordError(f"bad colour in {item!r}") from None
            t = self.diagram.index(label.strip())
            letter = (t, x)
            self._check_letter(letter)
            out.append(letter)
        return out

    def format(self, c: Sequence) -> str:
        if not c:
            return "e"
        return ",".join(f"{self.diagram.types[t]}:{x}" for t, x in c)

    def format_panel(self, P: ResidueRef) -> str:
        types = ",".join(self.diagram.types[t] for t in sorted(P.J))
        return f"{{{types}}}@{self.format(P.gate)}"

    def letters(self, pairs: Iterable) -> Chamber:
        """Normal form of ``[(label, colour), ...]`` given with type labels."""
        return self.normal_form((self.diagram.index(t), x) for t, x in pairs)


def bfs_distances(building: Building, source: Chamber, targets: Iterable, max_depth: int) -> dict:
    """Plain BFS distances from ``source`` to each target (brute-force oracle)."""
    targets = set(targets)
    found = {}
    seen = {source}
    frontier = deque([(source, 0)])
    while frontier and len(found) < len(targets):
        c, k = frontier.popleft()
        if c in targets:
            found[c] = k
        if k == max_depth:
            continue
        for _, d in building.neighbours(c):
            if d not in seen:
                seen.add(d)
                frontier.append((d, k + 1))
    return found
