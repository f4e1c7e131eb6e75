"""Verdicts on the universal group read off from the diagram and the local groups."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping

from . import permgroups as pg
from .diagram import Diagram


@dataclass
class Reason:
    condition: str
    outcome: bool | None
    witness: object = None


@dataclass
class Verdict:
    name: str
    value: bool | None
    reasons: list = field(default_factory=list)
    citation: str = ""

    @property
    def label(self) -> str:
        return {True: "true", False: "false", None: "unknown"}[self.value]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.label,
            "citation": self.citation,
            "reasons": [
                {**asdict(r), "outcome": {True: "true", False: "false", None: "unknown"}[r.outcome]}
                for r in self.reasons
            ],
        }


@dataclass(frozen=True)
class GroupDescriptor:
    """Abstract flags for a local group not given by generators."""

    compactly_generated: bool | None
    finitely_many_orbits: bool


def _t(F, i) -> str:
    return F.diagram.types[i]


def verdict_discrete(F) -> Verdict:
    v = Verdict("discrete", True, citation="discreteness criterion: discrete iff every local group acts freely")
    for i, G in enumerate(F.groups):
        w = pg.free_witness(G)
        free = w is None
        v.reasons.append(
            Reason(f"F_{_t(F, i)} acts freely", free, None if free else pg.format_cycles(w))
        )
        if not free:
            v.value = False
    return v


def verdict_locally_compact(F) -> Verdict:
    v = Verdict(
        "locally_compact",
        True,
        citation="local compactness criterion: locally compact iff every point stabiliser of every local group has only finite orbits",
    )
    for i, G in enumerate(F.groups):
        sizes = {x: sorted(len(o) for o in pg.orbits(pg.point_stabilizer(G, x))) for x in range(G.n)}
        v.reasons.append(
            Reason(
                f"point stabilisers of F_{_t(F, i)} have finite orbits (finite degree {G.n})",
                True,
                sizes,
            )
        )
    return v


@dataclass
class OrbitVerdict:
    count: int
    transitive: bool
    per_type: dict


def verdict_orbits(F) -> OrbitVerdict:
    per = {_t(F, i): len(F.orbits(i)) for i in range(F.diagram.rank)}
    count = 1
    for n in per.values():
        count *= n
    return OrbitVerdict(count, count == 1, per)


def _uplus_reasons(F, d: Diagram) -> tuple[bool, list]:
    reasons = []
    ok = True
    for i, G in enumerate(F.groups):
        plus = pg.plus_subgroup(G)
        same = plus.order == G.order
        reasons.append(
            Reason(
                f"F_{_t(F, i)} is generated by point stabilisers",
                same,
                None if same else {"order": G.order, "plus_order": plus.order},
            )
        )
        ok &= same
    transitive = [d.types[i] for i, G in enumerate(F.groups) if pg.is_transitive(G)]
    uncovered = [
        (s, t) for s, t in d.inf_edges() if s not in transitive and t not in transitive
    ]
    reasons.append(
        Reason(
            "types with transitive local groups form a vertex cover",
            not uncovered,
            {"transitive": transitive} if not uncovered else {"uncovered_edge": uncovered[0]},
        )
    )
    return ok and not uncovered, reasons


def verdict_u_eq_uplus(F, d: Diagram | None = None) -> Verdict:
    d = d or F.diagram
    ok, reasons = _uplus_reasons(F, d)
    return Verdict(
        "u_equals_uplus",
        ok,
        reasons,
        citation="generation by chamber stabilisers: iff every local group is generated by point stabilisers and the transitive ones cover every infinite edge",
    )


def verdict_simple(F, d: Diagram | None = None) -> Verdict:
    d = d or F.diagram
    v = Verdict(
        "simple",
        True,
        citation="simplicity criterion for thick irreducible diagrams of rank at least 2: same condition as generation by chamber stabilisers",
    )
    gates = [
        ("hypothesis: thick (all q_i >= 3)", d.thick, None if d.thick else dict(zip(d.types, d.q))),
        ("hypothesis: irreducible diagram", d.is_irreducible(), None),
        ("hypothesis: rank >= 2", d.rank >= 2, d.rank),
    ]
    for cond, ok, w in gates:
        v.reasons.append(Reason(cond, ok, w))
    if not all(ok for _, ok, _ in gates):
        v.value = False
        return v
    ok, reasons = _uplus_reasons(F, d)
    v.reasons.extend(reasons)
    v.value = ok
    return v


def verdict_compactly_generated(
    F=None,
    d: Diagram | None = None,
    descriptors: Mapping | None = None,
    summary: dict | None = None,
) -> Verdict:
    """Three-valued: descriptors may leave generation of a local group open.

    With concrete finite groups both conditions hold and the verdict is true;
    ``summary`` (e.g. from the compact-generation sets) is attached as witness.
    """
    v = Verdict(
        "compactly_generated",
        True,
        citation="compact generation: necessary that local groups have finitely many orbits; sufficient together with compactly generated local groups; the remaining case is open",
    )
    if descriptors is None:
        for i, G in enumerate(F.groups):
            v.reasons.append(
                Reason(f"F_{_t(F, i)} has finitely many orbits", True, len(F.orbits(i)))
            )
            v.reasons.append(
                Reason(
                    f"F_{_t(F, i)} is compactly generated (finite; panel stabilisers likewise)",
                    True,
                    len(G.gens),
                )
            )
        if summary is not None:
            v.reasons.append(Reason("explicit generating data", True, summary))
        return v
    any_infinite = False
    any_unknown = False
    for t, desc in descriptors.items():
        v.reasons.append(Reason(f"F_{t} has finitely many orbits", desc.finitely_many_orbits))
        v.reasons.append(Reason(f"F_{t} is compactly generated", desc.compactly_generated))
        any_infinite |= not desc.finitely_many_orbits
        any_unknown |= desc.compactly_generated is not True
    if any_infinite:
        v.value = False
    elif any_unknown:
        v.value = None
    return v


def verdict_primitive_on_residues(F, d: Diagram | None, J: Iterable) -> Verdict:
    d = d or F.diagram
    J = {d.types[d.pos(t)] for t in J}
    if J == set(d.types):
        raise ValueError("J must be a proper subset of the types")
    v = Verdict(
        f"primitive_on_residues[{','.join(t for t in d.types if t in J)}]",
        True,
        citation="primitivity on residues: iff exactly one type lies outside J, its local group is primitive and non-regular, and every type at infinite distance from it has a transitive local group",
    )
    rest = [t for t in d.types if t not in J]
    one = len(rest) == 1
    v.reasons.append(Reason("(i) exactly one type outside J", one, rest))
    if not one:
        v.value = False
        return v
    k = d.index(rest[0])
    G = F.groups[k]
    prim = pg.is_primitive(G)
    reg = pg.is_regular(G)
    block = None if prim else (pg.nontrivial_block(G) if pg.is_transitive(G) else "intransitive")
    witness = {"primitive": prim, "regular": reg}
    if block is not None:
        witness["block"] = sorted(block) if isinstance(block, frozenset) else block
    v.reasons.append(Reason(f"(ii) F_{rest[0]} primitive and non-regular", prim and not reg, witness))
    bad = [
        d.types[i]
        for i in range(d.rank)
        if i != k and not d.commutes(i, k) and not pg.is_transitive(F.groups[i])
    ]
    v.reasons.append(
        Reason(f"(iii) transitive local groups at every type with m_i{rest[0]} = inf", not bad, bad or None)
    )
    v.value = prim and not reg and not bad
    return v


def all_verdicts(F, d: Diagram | None = None, summary: dict | None = None) -> list:
    d = d or F.diagram
    out = [
        verdict_discrete(F),
        verdict_locally_compact(F),
        verdict_u_eq_uplus(F, d),
        verdict_simple(F, d),
        verdict_compactly_generated(F, d, summary=summary),
    ]
    if d.rank >= 2:
        for k in d.types:
            out.append(verdict_primitive_on_residues(F, d, [t for t in d.types if t != k]))
    return out
