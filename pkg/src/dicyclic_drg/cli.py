"""Command-line entry point: verify | check | named | iso | export.

Exit codes: 0 success (theorem holds), 1 usage or input error,
2 mathematical violation found.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .cayley import Graph, cayley_graph, minimality_witnesses, parse_set_spec
from .drg import (
    RegularityFailure,
    amply_regular_params,
    intersection_array,
    primitivity_profile,
    strongly_regular_params,
)
from .errors import DicyclicError
from .graphkit import canonical_form, complete_bipartite, is_isomorphic, named_graph
from .groups import parse_group_spec
from .verifier import DEFAULT_N_CAP, classify_instance, verify_theorem

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_graph(spec: str) -> Graph:
    if spec.endswith(".json"):
        return Graph.from_json(Path(spec).read_text())
    return named_graph(spec)


def cmd_verify(args) -> int:
    if args.min_n < 2:
        raise UsageError(f"--min-n must be >= 2 (n > 1 required), got {args.min_n}")
    if args.max_n < args.min_n:
        raise UsageError(f"--max-n {args.max_n} < --min-n {args.min_n}")
    jobs = args.jobs or os.cpu_count() or 1

    def progress(g):
        if not args.quiet:
            print(
                f"n={g.n} {g.group}: {g.scanned} subsets, {g.generating} generating, "
                f"{g.minimal} minimal, {len(g.drg)} DRG, {len(g.violations)} violations",
                file=sys.stderr,
            )

    report = verify_theorem(
        args.min_n,
        args.max_n,
        jobs=jobs,
        cap=args.cap,
        group_by_iso=args.group_by_iso,
        deterministic=args.deterministic,
        progress=progress,
    )
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(report.summary())
    return EXIT_OK if report.theorem_holds else EXIT_VIOLATION


def cmd_check(args) -> int:
    G = parse_group_spec(args.group)
    S = parse_set_spec(G, args.set)
    g = cayley_graph(G, S)
    generates, witnesses = minimality_witnesses(G, S)
    connected = g.is_connected()
    print(f"group: {G.spec} (order {G.order})")
    print(f"set: {S} (size {len(S)})")
    print(f"connected: {'yes' if connected else 'no'}")
    if not generates:
        print("not generating; disconnected")
        return EXIT_OK
    minimal = bool(witnesses)
    wtext = ", ".join(G.format(w) for w in witnesses)
    print(f"minimality witnesses: {wtext or 'none'}")
    verdict = intersection_array(g)
    print(f"regularity: {verdict}")
    amply = amply_regular_params(g)
    if isinstance(amply, RegularityFailure):
        print(f"amply regular: no ({amply})")
    else:
        flag = "" if amply.has_distance2 else " (no distance-2 pairs)"
        print(f"amply regular: {amply}{flag}")
    parts = [f"DRG {verdict.array}" if verdict.is_distance_regular else "not DRG"]
    parts.append(f"minimal (witnesses: {len(witnesses)})" if minimal else "not minimal")
    if verdict.is_distance_regular:
        print(f"primitivity: {json.dumps(primitivity_profile(g).to_dict(), sort_keys=True)}")
    if G.order == 8:
        iso = is_isomorphic(g, complete_bipartite(4))
        print(f"isomorphic to K4,4: {'yes' if iso else 'no'}")
        parts.append("≅ K4,4" if iso else "≇ K4,4")
    else:
        parts.append("not K4,4 (order != 8)")
    status = EXIT_OK
    if minimal and G.kind == "generalized-dicyclic":
        failed = classify_instance(G, S).failures
        for c in failed:
            print(f"CLAIM FAILED: {c.claim} witness {c.witness}: {c.detail}")
        if failed:
            status = EXIT_VIOLATION
    print("; ".join(parts))
    return status


def cmd_named(args) -> int:
    g = named_graph(args.spec)
    verdict = intersection_array(g)
    head = f"{g.order} vertices"
    degrees = set(g.degrees())
    head += f", {degrees.pop()}-regular" if len(degrees) == 1 else ", not regular"
    srg = strongly_regular_params(g)
    if not isinstance(srg, RegularityFailure):
        head += f", SRG{srg}"
    elif verdict.is_distance_regular:
        head += f", DRG {verdict.array}"
    else:
        head += ", not DRG"
    print(head)
    print(f"intersection array: {verdict.array if verdict.is_distance_regular else verdict.failure}")
    return EXIT_OK


def cmd_iso(args) -> int:
    g1, g2 = _load_graph(args.first), _load_graph(args.second)
    same = is_isomorphic(g1, g2)
    v1, v2 = intersection_array(g1), intersection_array(g2)
    if same:
        print("true")
    elif v1.is_distance_regular and v2.is_distance_regular and v1.array == v2.array:
        print(f"false (arrays equal: {v1.array})")
    else:
        a1 = v1.array if v1.is_distance_regular else "not DRG"
        a2 = v2.array if v2.is_distance_regular else "not DRG"
        print(f"false (arrays: {a1} vs {a2})")
    print(f"certificate 1: {canonical_form(g1).hex()}")
    print(f"certificate 2: {canonical_form(g2).hex()}")
    return EXIT_OK


def cmd_export(args) -> int:
    if args.group or args.set:
        if not (args.group and args.set) or args.spec:
            raise UsageError("export takes either a graph spec or both --group and --set")
        G = parse_group_spec(args.group)
        g = cayley_graph(G, parse_set_spec(G, args.set))
    elif args.spec:
        g = _load_graph(args.spec)
    else:
        raise UsageError("export needs a graph spec or --group/--set")
    text = g.to_dot() if args.format == "dot" else g.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dicyclic-drg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="exhaustive theorem check over n_min..n_max")
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: all CPUs)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--group-by-iso", action="store_true", help="group DRG instances by canonical certificate")
    p.add_argument("--deterministic", action="store_true", help="zero timing fields")
    p.add_argument("--cap", type=int, default=DEFAULT_N_CAP, help="largest n allowed")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", help="analyse one Cayley graph")
    p.add_argument("--group", required=True, help='e.g. "dicyclic:4"')
    p.add_argument("--set", required=True, help='e.g. "(1);(3);t*(0);t*(2)"')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("named", help="describe a named graph")
    p.add_argument("spec", help='"complete:n", "kmm:m", "cycle:n", "hamming:d,q", "shrikhande", "doob:n,m"')
    p.set_defaults(func=cmd_named)

    p = sub.add_parser("iso", help="isomorphism test between two graphs")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("export", help="write a graph as DOT or JSON")
    p.add_argument("spec", nargs="?")
    p.add_argument("--group")
    p.add_argument("--set")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DicyclicError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
