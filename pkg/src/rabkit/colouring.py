"""A canonical legal colouring built from per-tree-wall colour charts."""
from __future__ import annotations

from dataclasses import dataclass, field

from .chambers import BASE, Building, Chamber, ResidueRef


class ColouringInconsistency(AssertionError):
    """Two derivations of the same colour disagree (an implementation bug)."""


@dataclass
class LegalityReport:
    radius: int
    ok: bool
    panels_checked: int = 0
    conditions_checked: int = 0
    violation: str | None = None

    def summary(self) -> str:
        if self.ok:
            return (
                f"legal on ball r={self.radius}: {self.panels_checked} panels, "
                f"{self.conditions_checked} conditions"
            )
        return f"violation on ball r={self.radius}: {self.violation}"


class LegalColouring:
    """Colours ``λ_i(c)`` computed lazily by recursion towards the base chamber.

    Each tree-wall (the ``({i} ∪ i^⊥)``-residue through an ``i``-panel) owns
    a chart from intrinsic to external colours. The chart sends intrinsic 0
    to the colour of the wall's base-side chambers and fills the remaining
    intrinsic colours with the remaining external colours in ascending
    order, so it does not depend on evaluation order.
    """

    def __init__(self, building: Building):
        self.building = building
        self.diagram = building.diagram
        n = self.diagram.rank
        self._wall_types = tuple(
            frozenset({i} | {s for s in range(n) if building._comm[i][s]}) for i in range(n)
        )
        self.charts: dict[tuple, tuple] = {}
        self._memo: dict[tuple, int] = {}

    # charts -----------------------------------------------------------

    def wall_key(self, c: Chamber, i: int) -> tuple:
        return i, self.building.residue_gate(c, self._wall_types[i])

    def _chart(self, key: tuple, seed: int) -> tuple:
        chart = self.charts.get(key)
        if chart is None:
            q = self.diagram.q[key[0]]
            chart = (seed,) + tuple(y for y in range(q) if y != seed)
            self.charts[key] = chart
        elif chart[0] != seed:
            raise ColouringInconsistency(
                f"wall {key} seeded with {chart[0]} and {seed}"
            )
        return chart

    def corrupt_chart(self, c: Chamber, i, chart) -> None:
        """Test hook: overwrite the chart of the wall through ``c`` and forget memos."""
        i = self.diagram.pos(i)
        self.charts[self.wall_key(c, i)] = tuple(chart)
        self._memo.clear()

    # colours ----------------------------------------------------------

    def colour(self, c: Chamber, i) -> int:
        """``λ_i(c)``; every terminal-letter predecessor must give the same answer."""
        i = self.diagram.pos(i)
        key = (c, i)
        got = self._memo.get(key)
        if got is not None:
            return got
        # iterative deepening keeps recursion shallow on long words
        stack = [c]
        while stack:
            x = stack[-1]
            missing = [
                p for p in self._preds(x) if (p, i) not in self._memo
            ]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            if (x, i) not in self._memo:
                self._memo[(x, i)] = self._derive(x, i)
        return self._memo[key]

    def _preds(self, c: Chamber) -> list:
        b = self.building
        return [b.drop(c, p) for p in b.terminal_letters(c)]

    def _derive(self, c: Chamber, i: int) -> int:
        if c == BASE:
            return 0
        b = self.building
        values = set()
        for p in b.terminal_letters(c):
            t = c[p][0]
            pred = b.drop(c, p)
            before = self._memo[(pred, i)]
            if t != i:
                values.add(before)
            else:
                chart = self._chart(self.wall_key(c, i), before)
                values.add(chart[b.intrinsic(c, i)])
        if len(values) != 1:
            raise ColouringInconsistency(
                f"λ_{self.diagram.types[i]}({b.format(c)}) derived as {sorted(values)}"
            )
        return values.pop()

    def vector(self, c: Chamber) -> tuple:
        return tuple(self.colour(c, i) for i in range(self.diagram.rank))

    def member_with_colour(self, P: ResidueRef, x: int) -> Chamber:
        for m in self.building.panel_members(P):
            if self.colour(m, P.type) == x:
                return m
        raise ColouringInconsistency(f"no member of colour {x} in {self.building.format_panel(P)}")

    def panel_colours(self, P: ResidueRef) -> dict:
        """External colour -> member on the panel ``P``."""
        return {self.colour(m, P.type): m for m in self.building.panel_members(P)}

    # verification ----------------------------------------------------

    def verify_legal(self, r: int) -> LegalityReport:
        """Check bijectivity and constancy on every panel contained in ``ball(base, r)``."""
        b = self.building
        n = self.diagram.rank
        report = LegalityReport(radius=r, ok=True)
        inside = set(b.ball(BASE, r))
        seen = set()
        try:
            for c in sorted(inside, key=b.sort_key):
                for t in range(n):
                    P, members = b.panel(c, t)
                    if P in seen or not set(members) <= inside:
                        continue
                    seen.add(P)
                    report.panels_checked += 1
                    cols = [self.colour(m, t) for m in members]
                    report.conditions_checked += 1
                    if sorted(cols) != list(range(self.diagram.q[t])):
                        report.ok = False
                        report.violation = (
                            f"panel {b.format_panel(P)}: λ_{self.diagram.types[t]} = {cols} is not a bijection"
                        )
                        return report
                    for s in range(n):
                        if s == t:
                            continue
                        report.conditions_checked += 1
                        other = {self.colour(m, s) for m in members}
                        if len(other) != 1:
                            report.ok = False
                            report.violation = (
                                f"panel {b.format_panel(P)}: λ_{self.diagram.types[s]} takes values "
                                f"{sorted(other)}, not constant"
                            )
                            return report
        except ColouringInconsistency as exc:
            report.ok = False
            report.violation = f"inconsistent colouring: {exc}"
        return report

    # harmony -----------------------------------------------------------

    def harmonious(self, a, b, F) -> bool:
        """Chambers (or residues of equal type) with colours in common ``F_i``-orbits.

        For residues of type ``K`` the relevant types are those outside ``K``,
        whose colour is constant on the residue.
        """
        if isinstance(a, ResidueRef) != isinstance(b, ResidueRef):
            raise TypeError("harmony compares two chambers or two residues")
        if isinstance(a, ResidueRef):
            if a.J != b.J:
                raise ValueError("residues of different type sets cannot be harmonious")
            types = [i for i in range(self.diagram.rank) if i not in a.J]
            ca, cb = a.gate, b.gate
        else:
            types = range(self.diagram.rank)
            ca, cb = a, b
        return all(
            F.orbit_index(i, self.colour(ca, i)) == F.orbit_index(i, self.colour(cb, i))
            for i in types
        )

    def harmony_key(self, c: Chamber, F) -> tuple:
        return tuple(F.orbit_index(i, self.colour(c, i)) for i in range(self.diagram.rank))
