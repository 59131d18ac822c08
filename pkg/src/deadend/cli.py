"""Command-line front end: balls, distances, depths, witnesses, suites.

Subcommands:

* ``ball``    -- build a ball and print its sphere sizes as CSV.
* ``depth``   -- dead-end depth of one element.
* ``witness`` -- a bounded-length word for an element of the deep regions.
* ``verify``  -- run a named verification suite; exit 0 only if it passes.
* ``report``  -- summarize a previously saved JSON report.

Groups are named Z, LL, H, G, K; generating sets A, B, C, D, S, LL-std,
Z:{m,n}, or a path to a JSON file.  Elements are written as a word over
``astu`` (uppercase inverts), as ``gn(N)`` for the deep element, as
``{lamps}@(position)``, or as a plain integer for Z.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import paths, verify
from .groups import (
    GROUPS,
    GenSet,
    HElem,
    KElem,
    ZElem,
    builtin_genset,
    genset_from_json,
    special_element,
)
from .lamps import LaurentPolyZ2, loc_canonicalize
from .metric import (
    ElementLimitExceeded,
    cached_ball,
    depth,
    distance,
    eval_tokens,
    tokens_to_word,
)


def _resolve_genset(name: str, group) -> GenSet:
    if name.endswith(".json"):
        gs = genset_from_json(name)
    else:
        gs = builtin_genset(name)
    if group is not None and gs.group is not group:
        raise SystemExit(f"generating set {gs.name} belongs to {gs.group.group_name}")
    return gs


def _parse_element(group, spec: str, n: int | None = None):
    spec = spec.strip()
    if spec == "gn" or (spec.startswith("gn(") and spec.endswith(")")):
        nn = n if spec == "gn" else int(spec[3:-1])
        if nn is None:
            raise SystemExit("gn needs n: pass n=<value> or write gn(<value>)")
        return special_element(group, nn)
    if group is ZElem:
        return ZElem(int(spec))
    if "@" in spec:
        lamp_part, pos_part = spec.split("@", 1)
        lamp_part = lamp_part.strip()
        if not (lamp_part.startswith("{") and lamp_part.endswith("}")):
            raise SystemExit(f"bad lamp set {lamp_part!r}")
        body = lamp_part[1:-1].strip()
        exps = [int(x) for x in body.split(",")] if body else []
        pos = tuple(int(x) for x in pos_part.strip().strip("()").split(","))
        lamps = LaurentPolyZ2.from_exponents(exps)
        if group in (KElem,) or group.group_name == "G":
            return group(loc_canonicalize(lamps, 0), pos)
        if group.group_name == "LL":
            return group(lamps, pos[0])
        return group(lamps, pos)
    return group.eval_word(spec)


def _split_kv(extras: list[str]) -> tuple[dict, list[str]]:
    kv = {}
    rest = []
    for tok in extras:
        if "=" in tok:
            key, val = tok.split("=", 1)
            kv[key] = val
        else:
            rest.append(tok)
    return kv, rest


def _emit_json(payload: dict, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def cmd_ball(args) -> int:
    group = GROUPS[args.group]
    gs = _resolve_genset(args.genset, group)
    try:
        dm = cached_ball(group, gs, args.radius, args.convention,
                         cache_dir=args.cache, max_elements=args.mem_cap,
                         threads=args.threads)
    except ElementLimitExceeded as exc:
        dm = exc.partial
        print(f"element cap hit; reporting the completed radius {dm.radius}",
              file=sys.stderr)
    sizes = dm.sphere_sizes()
    print("radius,sphere_size,ball_size")
    total = 0
    for radius, size in enumerate(sizes):
        total += size
        print(f"{radius},{size},{total}")
    _emit_json({"group": args.group, "genset": gs.name, "radius": dm.radius,
                "convention": dm.convention, "sphere_sizes": sizes,
                "ball_size": total}, args.json)
    return 0


def cmd_depth(args) -> int:
    group = GROUPS[args.group]
    gs = _resolve_genset(args.genset, group)
    g = _parse_element(group, args.element)
    dm = cached_ball(group, gs, args.radius, args.convention,
                     cache_dir=args.cache, max_elements=args.mem_cap,
                     threads=args.threads)
    d = distance(dm, g)
    if not isinstance(d, int):
        print(f"distance: {d}; raise --radius to reach the element")
        return 1
    result = depth(dm, g, cap=args.cap)
    print(f"element: {g.serialize()}")
    print(f"distance: {d}")
    print(f"depth: {result}")
    _emit_json({"group": args.group, "genset": gs.name, "radius": args.radius,
                "element": g.serialize(), "distance": d, "depth": str(result)},
               args.json)
    return 0


def cmd_witness(args) -> int:
    group = GROUPS[args.group]
    kv, rest = _split_kv(args.spec)
    if "n" not in kv:
        raise SystemExit("witness needs n=<value>")
    n = int(kv["n"])
    spec = rest[0] if rest else "gn"
    g = _parse_element(group, spec, n=n)
    if group is HElem:
        tokens = paths.witness_H(g, n)
        wpath = paths.witness_H_path(g, n)
        gs = builtin_genset("C")
    elif group is KElem:
        tokens = paths.witness_K(g, n)
        wpath = paths.witness_K_path(g, n)
        gs = builtin_genset("A")
    else:
        raise SystemExit("witness construction lives in H or K")
    ok = eval_tokens(gs, tokens) == g
    word = tokens_to_word(tokens)
    print(f"element: {g.serialize()}")
    print(f"witness: {word or '(empty)'}")
    print(f"length: {len(tokens)} (bound {4 * n})")
    print(f"evaluates back: {ok}")
    _emit_json({"group": args.group, "n": n, "element": g.serialize(),
                "witness_word": word,
                "tokens": [f"{l}^{s}" for l, s in tokens],
                "length": len(tokens), "bound": 4 * n, "evaluates_back": ok,
                "polyline": [list(v) for v in wpath.polyline],
                "presses": list(wpath.presses)}, args.json)
    return 0 if ok and len(tokens) <= 4 * n else 1


def cmd_verify(args) -> int:
    kv, _ = _split_kv(args.params)
    params: dict = {"threads": args.threads, "deep": args.deep}
    if "n" in kv and ".." in kv["n"]:
        lo, hi = kv["n"].split("..")
        params["n_range"] = (int(lo), int(hi))
    elif "n" in kv:
        params["witness_n"] = int(kv["n"])
    if "R" in kv:
        params["radius"] = int(kv["R"])
    if "seed" in kv:
        params["seed"] = int(kv["seed"])
    if "trials" in kv:
        params["trials"] = int(kv["trials"])
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    reports = []
    ok = True
    for name in names:
        rep = verify.run_suite(name, **params)
        reports.append(rep)
        ok = ok and rep["pass"]
        _print_report(rep)
    payload = reports[0] if len(reports) == 1 else {"suites": reports,
                                                    "pass": ok}
    _emit_json(payload, args.json)
    return 0 if ok else 1


def _print_report(rep: dict) -> None:
    print(f"suite {rep['suite']}: {'PASS' if rep['pass'] else 'FAIL'} "
          f"(parameters {rep['parameters']})")
    for c in rep["claims"]:
        mark = "pass" if c["pass"] else "FAIL"
        print(f"  [{mark}] {c['claim']}: expected {c['expected']}, got {c['computed']}")
    res = rep["resources"]
    print(f"  resources: {res['elements_expanded']} elements expanded, "
          f"peak {res['peak_elements']}, {res['wall_time_s']}s")


def cmd_report(args) -> int:
    with open(args.path) as fh:
        payload = json.load(fh)
    reports = payload["suites"] if "suites" in payload else [payload]
    ok = True
    for rep in reports:
        _print_report(rep)
        ok = ok and rep["pass"]
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="deadend",
        description="Word metrics, dead-end depth, and witness words in "
                    "lamplighter-style groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, radius_required=False):
        p.add_argument("--convention", choices=("left", "right"), default="right")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--mem-cap", type=int, default=None,
                       help="element-count cap for ball construction")
        p.add_argument("--cache", default=None, help="directory for ball caches")
        p.add_argument("--json", default=None, help="write a JSON report here")

    p = sub.add_parser("ball", help="build a ball and print sphere sizes (CSV)")
    p.add_argument("group", choices=sorted(GROUPS))
    p.add_argument("genset")
    p.add_argument("radius", type=int)
    common(p)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("depth", help="dead-end depth of an element")
    p.add_argument("group", choices=sorted(GROUPS))
    p.add_argument("genset")
    p.add_argument("element")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--cap", type=int, default=32, help="depth search cap")
    common(p)
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("witness", help="bounded-length word for a deep-region element")
    p.add_argument("group", choices=("H", "K"))
    p.add_argument("spec", nargs="+",
                   help="n=<value> plus an element: gn, a word, or {lamps}@(pos)")
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    p.add_argument("params", nargs="*", help="key=value: n=2..12, R=6, seed=..., trials=...")
    p.add_argument("--deep", action="store_true",
                   help="larger radii and deeper elements (minutes, not seconds)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarize a saved JSON report")
    p.add_argument("path")
    p.set_defaults(func=cmd_report)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
