"""Command-line entry point: ``hatdigraph <subcommand> ...``.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 inconclusive, 3 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import io
from .constructions import TreeEdgeGraph
from .experiments import EXPERIMENTS, ExperimentReport, as_window, build_construction, run_experiment
from .groups import (
    cayley_coset_graph,
    clone_expansion_check,
    double_coset,
    generate_group,
    left_action_is_automorphic,
    parse_cycles,
)
from .reachability import is_complete_bipartite, r_digraph, reach_partition
from .symmetry import property_z_check, s_arc_transitivity_report

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2, 3


def _parse_window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("window must look like lo:hi")
    return int(lo), int(hi)


def _parse_param(text: str) -> tuple[str, Any]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"parameter {text!r} must look like key=value")
    try:
        return key, int(value)
    except ValueError:
        return key, value


def _construction_parser() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--construction", required=True,
                   help="tensor | tree | mckay | template | coloured | geometry (aliases 1-4)")
    p.add_argument("--k", type=int, default=2, help="tensor: size of the independent set")
    p.add_argument("--a", type=int, default=3, help="tree: degree of one side")
    p.add_argument("--b", type=int, default=3, help="tree: degree of the other side")
    p.add_argument("--radius", type=int, default=5, help="tree: truncation radius")
    p.add_argument("--alphabet", type=int, default=2, help="mckay: alphabet size")
    p.add_argument("--n", type=int, default=3, help="mckay: word length; geometry: dimension")
    p.add_argument("--q", type=int, default=2, help="geometry: field order (prime)")
    p.add_argument("--template", default="hexagon",
                   help="JSON template file, or hexagon / complete:2,2,2 / pg:n,q")
    p.add_argument("--window", type=_parse_window, default=(0, 4), help="levels lo:hi")
    p.add_argument("--core-margin", type=int, default=1, help="levels trimmed from each end for the core")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    return p


def _build(args: argparse.Namespace):
    obj = build_construction(
        args.construction, k=args.k, a=args.a, b=args.b, R=args.radius,
        s=args.alphabet, n=args.n, q=args.q, template=args.template,
    )
    lo, hi = args.window
    return obj, as_window(obj, lo, hi, margin=args.core_margin)


def _emit(doc: dict[str, Any], out: Path | None, name: str) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    sys.stdout.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def cmd_reach(args: argparse.Namespace) -> int:
    _, G = _build(args)
    part = reach_partition(G, witnesses_per_class=1)
    doc: dict[str, Any] = {
        "vertices": G.n,
        "arcs": G.num_arcs,
        "class_count": part.num_classes,
        "class_sizes": part.sizes,
    }
    if G.num_arcs:
        rr = r_digraph(G, which=args.which, check_isomorphism=not args.no_iso)
        R = rr.graph
        summary: dict[str, Any] = {
            "class": rr.class_id,
            "arcs": R.num_arcs,
            "out_degrees": sorted(set(R.out_degree[R.out_degree > 0].tolist())),
            "in_degrees": sorted(set(R.in_degree[R.in_degree > 0].tolist())),
            "all_classes_isomorphic": rr.all_isomorphic,
        }
        try:
            bip = is_complete_bipartite(R)
            summary.update(sources=len(bip.sources), sinks=len(bip.sinks), complete_bipartite=bip.complete)
            if bip.missing is not None:
                summary["missing_pair"] = [list(R.labels[i]) if R.labels else i for i in bip.missing]
        except ValueError:
            summary["complete_bipartite"] = None
        doc["R"] = summary
        if args.dot is not None:
            R_compact = R.induced_subgraph(np.flatnonzero((R.in_degree + R.out_degree) > 0))
            args.dot.parent.mkdir(parents=True, exist_ok=True)
            args.dot.write_text(io.to_dot(R_compact))
            doc["dot"] = str(args.dot)
    _emit(doc, args.out, "reach.json")
    return EXIT_PASS


def cmd_symmetry(args: argparse.Namespace) -> int:
    _, G = _build(args)
    rep = s_arc_transitivity_report(G, args.arc_length, cap=args.cap)
    d = rep.as_dict()
    _emit({k: d[k] for k in ("verdict", "orbit_count", "s", "core_size", "searches", "cap_hit")}, args.out, "symmetry.json")
    return {"Transitive": EXIT_PASS, "NotTransitive": EXIT_FAIL}.get(rep.verdict, EXIT_INCONCLUSIVE)


def cmd_propz(args: argparse.Namespace) -> int:
    _, G = _build(args)
    lev = property_z_check(G)
    doc: dict[str, Any] = {"result": "Consistent" if lev.consistent else "Conflict"}
    if lev.walk is not None:
        doc["walk"] = [[int(x), int(y), int(s)] for x, y, s in lev.walk]
        doc["displacement"] = lev.displacement
    _emit(doc, args.out, "property_z.json")
    return EXIT_PASS


def cmd_export(args: argparse.Namespace) -> int:
    obj, G = _build(args)
    out = args.out or Path(".")
    name = args.construction if not isinstance(obj, TreeEdgeGraph) else f"tree_{args.a}_{args.b}_{args.radius}"
    path = out / f"{name}.{args.format}"
    io.export(G, args.format, path)
    sys.stdout.write(f"{path}\n")
    return EXIT_PASS


def cmd_experiment(args: argparse.Namespace) -> int:
    params = dict(args.param or [])
    rep: ExperimentReport = run_experiment(args.name, out=args.out, **params)
    sys.stdout.write(rep.to_json())
    return rep.exit_code


def cmd_cayley(args: argparse.Namespace) -> int:
    n = args.degree
    group = generate_group([parse_cycles(g, n) for g in args.gens], degree=n)
    sub = group.subgroup([parse_cycles(g, n) for g in args.sub])
    A: set = set()
    for g in args.element or []:
        A.add(parse_cycles(g, n))
    for g in args.double_coset or []:
        A |= double_coset(sub, parse_cycles(g, n))
    if not A:
        raise ValueError("connection set is empty; give --element or --double-coset")
    C = cayley_coset_graph(group, sub, A)
    doc: dict[str, Any] = {
        "group_order": group.order,
        "subgroup_order": sub.order,
        "cosets": C.graph.n,
        "arcs": [list(map(int, a)) for a in C.graph.arcs],
        "loops_removed": C.loops_removed,
        "vertex_transitive": left_action_is_automorphic(C),
    }
    code = EXIT_PASS if doc["vertex_transitive"] else EXIT_FAIL
    if args.smaller is not None:
        smaller = group.subgroup([parse_cycles(g, n) for g in args.smaller])
        v = clone_expansion_check(group, sub, smaller, A)
        doc["clone_expansion"] = {
            "k": v.k, "block_sizes_ok": v.block_sizes_ok, "blocks_are_clones": v.blocks_are_clones,
            "quotient_isomorphic": v.quotient_isomorphic, "passed": v.passed,
        }
        if not v.passed:
            code = EXIT_FAIL
    _emit(doc, args.out, "cayley.json")
    return code


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with the "inconclusive" exit code
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hatdigraph", description="Build and check highly arc-transitive digraph windows.")
    sub = parser.add_subparsers(dest="command", required=True)
    cons = _construction_parser()

    p = sub.add_parser("reach", parents=[cons], help="reachability classes and the R digraph")
    p.add_argument("--which", type=int, default=0, help="class used for R")
    p.add_argument("--no-iso", action="store_true", help="skip the class isomorphism check")
    p.add_argument("--dot", type=Path, default=None, help="write the chosen class as DOT")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("symmetry", parents=[cons], help="s-arc orbit transitivity on the core")
    p.add_argument("--s", dest="arc_length", type=int, default=1, help="length of the s-arcs")
    p.add_argument("--cap", type=int, default=10**6, help="search node cap")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("propz", parents=[cons], help="property Z leveling check")
    p.set_defaults(func=cmd_propz)

    p = sub.add_parser("export", parents=[cons], help="write a window as DOT or JSON")
    p.add_argument("--format", choices=["dot", "json"], default="json")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--param", type=_parse_param, action="append", help="key=value, repeatable")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("cayley", help="Cayley coset graph of a permutation group")
    p.add_argument("--degree", type=int, required=True, help="number of points")
    p.add_argument("--gens", nargs="+", required=True, help="group generators in cycle notation")
    p.add_argument("--sub", nargs="*", default=[], help="subgroup generators")
    p.add_argument("--smaller", nargs="*", default=None, help="generators of a smaller subgroup for clone expansion")
    p.add_argument("--element", nargs="*", help="connection set elements")
    p.add_argument("--double-coset", nargs="*", help="g for each double coset LgL in the connection set")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_cayley)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
