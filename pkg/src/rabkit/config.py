"""Instance configuration: diagram, local groups, limits and seed."""
from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping

from . import limits as lim
from . import permgroups as pg
from .chambers import Building
from .colouring import LegalColouring
from .diagram import Diagram, DiagramError, path, tree, triangle
from .universal import LocalData


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    diagram: Diagram
    groups: dict  # type label -> PermGroup
    name: str = "config"
    limits: lim.Limits = field(default_factory=lim.get_limits)
    seed: int = 0
    suites: tuple = ()

    def local_data(self) -> LocalData:
        return LocalData(self.diagram, self.groups)

    def colouring(self) -> LegalColouring:
        return shared_colouring(self.diagram)

    def to_dict(self) -> dict:
        d = self.diagram.to_dict()
        d["local_groups"] = {
            t: {"generators": [pg.format_cycles(g) for g in G.gens]} for t, G in self.groups.items()
        }
        d["seed"] = self.seed
        return d


@functools.lru_cache(maxsize=32)
def shared_colouring(diagram: Diagram) -> LegalColouring:
    """One colouring per diagram; its memo only ever grows with deterministic values."""
    return LegalColouring(Building(diagram))


def parse_group(spec, n: int, where: str) -> pg.PermGroup:
    """A group from ``"symmetric"``/``"cyclic"``/``"trivial"`` or ``{"generators": [...]}``."""
    named = {"symmetric": pg.symmetric, "cyclic": pg.cyclic, "trivial": pg.trivial}
    if isinstance(spec, str):
        if spec not in named:
            raise ConfigError(f"{where}: unknown group name {spec!r}; expected one of {sorted(named)}")
        return named[spec](n)
    if isinstance(spec, list):
        spec = {"generators": spec}
    if not isinstance(spec, Mapping) or "generators" not in spec:
        raise ConfigError(f"{where}: expected {{\"generators\": [...]}} or a group name")
    gens = []
    for k, g in enumerate(spec["generators"]):
        try:
            if isinstance(g, str):
                gens.append(pg.parse_cycles(g, n))
            else:
                gens.append(pg.check_perm(g, n))
        except pg.PermError as exc:
            raise ConfigError(f"{where}.generators[{k}]: {exc} (q = {n})") from None
    return pg.PermGroup(n, gens)


def config_from_dict(data: Mapping, name: str = "config") -> Config:
    try:
        diagram = Diagram.from_dict(data)
    except DiagramError as exc:
        raise ConfigError(str(exc)) from None
    raw = data.get("local_groups")
    if not isinstance(raw, Mapping):
        raise ConfigError("'local_groups' must map each type label to a group")
    groups = {}
    for a, t in enumerate(diagram.types):
        if t not in raw:
            raise ConfigError(f"'local_groups' has no entry for type {t}")
        groups[t] = parse_group(raw[t], diagram.q[a], f"local_groups.{t}")
    extra = set(map(str, raw)) - set(diagram.types)
    if extra:
        raise ConfigError(f"'local_groups' names unknown type(s) {sorted(extra)}")
    caps = lim.get_limits()
    limits = caps
    if "limits" in data:
        known = {f.name for f in fields(lim.Limits)}
        updates = {}
        for k, v in dict(data["limits"]).items():
            if k not in known:
                raise ConfigError(f"limits.{k}: unknown limit; expected one of {sorted(known)}")
            if int(v) > getattr(caps, k):
                raise ConfigError(f"limits.{k}={v} exceeds the safety cap {getattr(caps, k)}")
            updates[k] = int(v)
        limits = replace(caps, **updates)
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("'seed' must be an integer")
    suites = tuple(data.get("suites", ()))
    return Config(diagram, groups, name=name, limits=limits, seed=seed, suites=suites)


def parse_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path}: top level must be an object")
    return config_from_dict(data, name=path.stem)


def _groups(diagram: Diagram, gens: list) -> dict:
    return {
        t: pg.PermGroup(q, [pg.parse_cycles(g, q) for g in gs])
        for t, q, gs in zip(diagram.types, diagram.q, gens)
    }


def default_matrix() -> list[Config]:
    """Six small instances covering the three diagram shapes and mixed local groups."""
    specs = [
        ("tree-sym", tree((3, 3)), [["(0 1)", "(0 1 2)"], ["(0 1)", "(0 1 2)"]]),
        ("tree-swap", tree((3, 3)), [["(0 1)"], ["(0 1)"]]),
        ("tree-q23", tree((2, 3)), [[], ["(0 1 2)"]]),
        ("path-mixed", path((3, 3, 3)), [["(0 1)"], ["(0 1)", "(0 1 2)"], ["(0 1)"]]),
        ("path-q232", path((2, 3, 2)), [["(0 1)"], ["(0 1 2)"], []]),
        ("triangle-mixed", triangle((3, 3, 3)), [["(0 1)", "(0 1 2)"], ["(0 1 2)"], ["(0 1)"]]),
    ]
    return [Config(D, _groups(D, gens), name=name) for name, D, gens in specs]


def default_config() -> Config:
    return default_matrix()[0]


def full_matrix() -> list[Config]:
    """Every diagram shape, ``q_i`` in {2, 3}, and every compatible listed local group."""
    shapes = [("tree", tree, 2), ("path", path, 3), ("triangle", triangle, 3)]
    choices = {
        2: [("trivial", []), ("swap", ["(0 1)"])],
        3: [("trivial", []), ("swap", ["(0 1)"]), ("cycle", ["(0 1 2)"]), ("sym", ["(0 1)", "(0 1 2)"])],
    }
    out = []
    for shape, make, rank in shapes:
        for qs in itertools.product((2, 3), repeat=rank):
            D = make(qs)
            for picks in itertools.product(*(choices[q] for q in qs)):
                name = f"{shape}-q{''.join(map(str, qs))}-" + "-".join(n for n, _ in picks)
                out.append(Config(D, _groups(D, [g for _, g in picks]), name=name))
    return out
