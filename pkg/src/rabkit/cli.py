"""Command-line interface: ``rabkit <command> [options]``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import geometry as geo
from . import implosion as imp_mod
from . import limits as lim
from . import permgroups as pg
from . import predicates as pr
from . import universal as uni
from .chambers import BASE, WordError
from .config import ConfigError, default_config, default_matrix, parse_config
from .diagram import DiagramError
from .suites import SUITES, run_suite


class UsageError(Exception):
    pass


def _load(args):
    path = args.config or getattr(args, "config_pos", None)
    return parse_config(path) if path else default_config()


def _fmt(b, c) -> str:
    return b.format(c)


# commands ------------------------------------------------------------------


def cmd_info(args):
    cfg = _load(args)
    d = cfg.diagram
    F = cfg.local_data()
    lam = cfg.colouring()
    summary = None
    if d.rank >= 2:
        cg = uni.compgen_sets(lam, F, check=False)
        summary = {"B": len(cg.B), "D": len(cg.D), "T_pairs": len(cg.T_pairs), "S_panels": len(cg.S_panels)}
    verdicts = pr.all_verdicts(F, d, summary=summary)
    orb = pr.verdict_orbits(F)
    payload = {
        "config": cfg.name,
        "diagram": {"types": list(d.types), "q": list(d.q), "inf_edges": [list(e) for e in d.inf_edges()]},
        "local_groups": {
            t: {"order": G.order, "generators": [pg.format_cycles(g) for g in G.gens],
                "orbits": [sorted(o) for o in pg.orbits(G)]}
            for t, G in zip(d.types, F.groups)
        },
        "orbits": {"count": orb.count, "transitive": orb.transitive, "per_type": orb.per_type},
        "verdicts": [v.to_dict() for v in verdicts],
    }
    lines = [
        f"config: {cfg.name}",
        f"diagram: types={','.join(d.types)} q={','.join(map(str, d.q))} "
        f"inf-edges={' '.join(s + '-' + t for s, t in d.inf_edges()) or 'none'}",
    ]
    for t, info in payload["local_groups"].items():
        lines.append(
            f"F_{t}: order {info['order']}, generators {' '.join(info['generators']) or '()'}, "
            f"orbits {info['orbits']}"
        )
    lines.append(f"U-orbits on chambers: {orb.count} (transitive: {str(orb.transitive).lower()})")
    for v in payload["verdicts"]:
        lines.append(f"{v['name']}: {v['value']}  [{v['citation']}]")
        for r in v["reasons"]:
            w = "" if r["witness"] is None else f"  witness: {r['witness']}"
            lines.append(f"  - {r['condition']}: {r['outcome']}{w}")
    return True, payload, lines


def cmd_colour(args):
    cfg = _load(args)
    lam = cfg.colouring()
    b = lam.building
    c = b.parse_word(args.chamber)
    vec = lam.vector(c)
    payload = {"chamber": _fmt(b, c), "colours": dict(zip(cfg.diagram.types, vec))}
    lines = [f"chamber: {_fmt(b, c)}"] + [f"lambda_{t} = {x}" for t, x in zip(cfg.diagram.types, vec)]
    return True, payload, lines


def cmd_reduce(args):
    cfg = _load(args)
    lam = cfg.colouring()
    b = lam.building
    start = b.parse_word(args.start)
    g = geo.gallery_from_steps(b, b.parse_letters(args.gallery), start)
    red = geo.reduce_gallery(b, g)
    delta = geo.weyl_word(b, red.types)
    payload = {
        "input": [_fmt(b, c) for c in g.chambers],
        "reduced": [_fmt(b, c) for c in red.chambers],
        "types": [cfg.diagram.types[t] for t in red.types],
        "distance": len(red),
        "delta": "".join(delta),
    }
    lines = [
        "input:    " + " -> ".join(payload["input"]),
        "reduced:  " + " -> ".join(payload["reduced"]),
        f"distance: {payload['distance']}",
        f"delta:    {payload['delta'] or 'e'}",
    ]
    return True, payload, lines


def cmd_extend(args):
    cfg = _load(args)
    lam = cfg.colouring()
    b = lam.building
    F = cfg.local_data()
    word, sep, t = args.panel.rpartition(":")
    if not sep:
        raise UsageError("--panel expects <word>:<type>, e.g. 'e:1' or '1:2,2:1:1'")
    k = cfg.diagram.index(t.strip())
    P0 = b.panel(b.parse_word(word), k)[0]
    f0 = pg.parse_cycles(args.perm, cfg.diagram.q[k])
    g = uni.extend_local(lam, P0, f0, F)
    ball = b.ball(BASE, args.radius)
    rep = uni.audit(g, ball, F)
    table = [[_fmt(b, c), _fmt(b, g(c))] for c in ball]
    payload = {
        "panel": b.format_panel(P0),
        "f0": pg.format_cycles(f0),
        "local_action_at_panel": pg.format_cycles(uni.local_action(g, P0)),
        "table": table,
        "audit": {"ok": rep.ok, "chambers": rep.chambers, "panels": rep.panels, "failures": rep.failures},
    }
    lines = [
        f"panel: {payload['panel']}  f0 = {payload['f0']}",
        f"local action at panel: {payload['local_action_at_panel']}",
    ] + [f"  {c} -> {d}" for c, d in table] + [
        f"audit: {'ok' if rep.ok else 'FAILED'} ({rep.chambers} chambers, {rep.panels} panels)"
    ] + [f"  ! {f}" for f in rep.failures]
    return rep.ok, payload, lines


def cmd_orbits(args):
    cfg = _load(args)
    lam = cfg.colouring()
    b = lam.building
    F = cfg.local_data()
    ball = b.ball(BASE, args.radius)
    harmony = uni.harmony_classes(lam, ball, F)
    gens = uni.uplus_generators(lam, F, ball)
    region = set(ball)
    seen: set = set()
    plus = []
    for c in ball:
        if c not in seen:
            orb = uni.closure_in_region([c], gens, region)
            seen |= orb
            plus.append(sorted(orb, key=b.sort_key))
    ok = all(
        lam.harmony_key(orb[0], F) == lam.harmony_key(c, F) for orb in plus for c in orb
    )
    payload = {
        "radius": args.radius,
        "harmony_classes": [
            {"orbit_key": list(k), "chambers": [_fmt(b, c) for c in v]} for k, v in harmony.items()
        ],
        "uplus_classes": [[_fmt(b, c) for c in orb] for orb in plus],
        "uplus_within_harmony": ok,
    }
    lines = [f"U-orbits (harmony classes) on ball(base, {args.radius}): {len(harmony)}"]
    for k, v in harmony.items():
        lines.append(f"  {list(k)}: {len(v)} chambers: {' '.join(_fmt(b, c) for c in v)}")
    lines.append(f"U+ closure classes: {len(plus)}")
    for orb in plus:
        lines.append(f"  {len(orb)} chambers: {' '.join(_fmt(b, c) for c in orb)}")
    lines.append(f"U+ classes inside harmony classes: {str(ok).lower()}")
    return ok, payload, lines


def cmd_implode(args):
    cfg = _load(args)
    lam = cfg.colouring()
    b = lam.building
    eqs = imp_mod.parse_classes(args.classes, cfg.diagram)
    imp = imp_mod.build_implosion(lam, eqs)
    rep = imp_mod.verify_implosion(imp, args.radius)
    td = imp.target_diagram
    sample = [[_fmt(b, c), imp.target.format(imp.tau(c))] for c in b.ball(BASE, min(args.radius, 2))]
    payload = {
        "classes": {
            cfg.diagram.types[a]: [sorted(blk) for blk in p] for a, p in enumerate(imp.partitions)
        },
        "target": {"types": list(td.types), "q": list(td.q), "inf_edges": [list(e) for e in td.inf_edges()]},
        "tau": sample,
        "verification": {
            "ok": rep.ok, "radius": rep.radius, "chambers": rep.chambers,
            "pairs": rep.pairs, "target_ball": rep.target_ball, "failures": rep.failures,
        },
    }
    lines = [
        "classes: " + "; ".join(f"{t}: {v}" for t, v in payload["classes"].items()),
        f"target: types={','.join(td.types) or '(none)'} q={','.join(map(str, td.q)) or '()'} "
        f"inf-edges={' '.join(s + '-' + t for s, t in td.inf_edges()) or 'none'}",
    ] + [f"  tau({c}) = {d}" for c, d in sample] + [
        f"verification on r={rep.radius}: {'ok' if rep.ok else 'FAILED'} "
        f"({rep.chambers} chambers, {rep.pairs} pairs, target ball {rep.target_ball})"
    ] + [f"  ! {f}" for f in rep.failures]
    return rep.ok, payload, lines


def cmd_verify(args):
    cfgs = [_load(args)] if args.config else default_matrix()
    results = []
    for cfg in cfgs:
        results.extend(run_suite(args.suite, cfg, radius=args.radius, seed=args.seed))
    ok = all(r.ok for r in results)
    payload = {"ok": ok, "results": [r.to_dict() for r in results]}
    lines = []
    for r in results:
        lines.append(r.line())
        lines.extend(f"  ! {f}" for f in r.failures)
    lines.append(f"{'PASS' if ok else 'FAIL'}: {sum(r.ok for r in results)}/{len(results)} suite runs passed")
    return ok, payload, lines


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: built-in rank-2 tree instance)")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks (default 0)")

    p = argparse.ArgumentParser(prog="rabkit", description="Universal groups of right-angled buildings at desk scale.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common], help="diagram, local groups and verdicts")
    s.add_argument("config_pos", nargs="?", metavar="CONFIG", help="JSON config file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("colour", parents=[common], help="colour vector of a chamber")
    s.add_argument("--chamber", required=True, help='chamber word, e.g. "1:2,2:1" ("e" is the base)')
    s.set_defaults(func=cmd_colour)

    s = sub.add_parser("reduce", parents=[common], help="reduce a gallery to a minimal one")
    s.add_argument("--gallery", required=True, help='steps "type:colour,..." taken from the start chamber')
    s.add_argument("--start", default="e", help="start chamber word (default: base)")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("extend", parents=[common], help="extend a local permutation at a panel")
    s.add_argument("--panel", required=True, help='"<word>:<type>", e.g. "e:1"')
    s.add_argument("--perm", required=True, help='permutation in cycle notation, e.g. "(0 1)"')
    s.add_argument("--radius", type=int, default=2)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("orbits", parents=[common], help="harmony classes and U+ closure classes on a ball")
    s.add_argument("--radius", type=int, default=2)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("implode", parents=[common], help="implode along colour classes")
    s.add_argument("--classes", required=True, help='e.g. "1:0|1,2;2:*" (unlisted types keep all colours apart)')
    s.add_argument("--radius", type=int, default=3)
    s.set_defaults(func=cmd_implode)

    s = sub.add_parser("verify", parents=[common], help="run property suites")
    s.add_argument("--suite", required=True, choices=SUITES + ("all",))
    s.add_argument("--radius", type=int, default=None)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        lim.set_limits(None)
        ok, payload, lines = args.func(args)
    except (UsageError, ConfigError, DiagramError, WordError, pg.PermError,
            imp_mod.PartitionError, uni.MembershipError, geo.GalleryError,
            lim.LimitExceeded, ValueError) as exc:
        print(f"rabkit: error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
