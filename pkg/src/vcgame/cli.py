"""Command line front end: classify graphs, report game facts, construct,
verify and enumerate allocation schemes, run stable matchings.

Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
errors (including truncated enumerations).  Output is byte-deterministic for
a fixed input and configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (ContractViolation, EnumerationTruncated, OracleCapError,
                     VertexCoverGameError)
from .game import DEFAULT_EDGE_CAP, VertexCoverGame, is_submodular_graph
from .graph import Graph, is_bipartite, matching_number, parse_graph, vertex_cover_number
from .matching import (DEFAULT_ENUM_CAP, PreferenceSystem, count_integral_pmas,
                       enumerate_integral_pmas, gale_shapley, scheme_from_preferences)
from .pmas import (AllocationScheme, classify_components, construct_pmas,
                   fraction_str, recognize_population_monotonic, scheme_from_json,
                   scheme_table_to_jsonable, verify_pmas)


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vcgame",
        description="Analyze vertex cover games on edge players and their "
                    "population monotonic allocation schemes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, *, coalition=False, prefs=False,
            materialize=False, max_edges=False, max_enumerate=False,
            scheme_arg=False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, metavar="FILE",
                       help="edge-list graph file")
        p.add_argument("--output", metavar="FILE",
                       help="write the result here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if coalition:
            p.add_argument("--coalition", metavar="LIST",
                           help="comma-separated edge indices (default: all players)")
        if prefs:
            p.add_argument("--prefs", metavar="FILE",
                           help="JSON preference orders: vertex label -> edge index list")
        if materialize:
            p.add_argument("--materialize", action="store_true",
                           help="emit the full per-coalition table")
        if max_edges:
            p.add_argument("--max-edges", type=_positive_int, default=DEFAULT_EDGE_CAP,
                           metavar="N", help="exhaustive edge cap (default 16)")
        if max_enumerate:
            p.add_argument("--max-enumerate", type=_positive_int, default=DEFAULT_ENUM_CAP,
                           metavar="N", help="enumeration cap (default 10000)")
        if scheme_arg:
            p.add_argument("scheme", metavar="SCHEME",
                           help="JSON scheme file to verify")
        return p

    add("classify", "population-monotonicity verdict and component taxonomy")
    add("game-info", "matching/cover numbers and game-theoretic properties")
    add("construct", "build an allocation scheme (equal-split rule, or from --prefs)",
        coalition=True, prefs=True, materialize=True, max_edges=True)
    add("verify", "check a scheme file for efficiency and monotonicity",
        max_edges=True, scheme_arg=True)
    add("enumerate", "list all integral schemes", max_edges=True, max_enumerate=True)
    add("count", "count integral schemes without enumerating")
    add("stable-match", "run deferred acceptance on a coalition",
        coalition=True, prefs=True)
    return parser


def _load_graph(args) -> Graph:
    with open(args.input, "r", encoding="utf-8") as handle:
        return parse_graph(handle.read())


def _parse_coalition(text: str, graph: Graph):
    try:
        indices = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ContractViolation(f"bad coalition list {text!r}: {exc}") from exc
    for i in indices:
        if not 0 <= i < graph.n_edges:
            raise ContractViolation(f"edge index {i} out of range")
    if not indices:
        raise ContractViolation("coalition list is empty")
    return frozenset(indices)


def _load_prefs(graph: Graph, path: str) -> PreferenceSystem:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ContractViolation(f"preference file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ContractViolation("preference JSON must map vertex labels to edge lists")
    return PreferenceSystem(graph, raw)


def _render(args, doc: dict, text_lines: list[str]) -> str:
    if args.format == "json":
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join(text_lines) + "\n"


def _table_text_lines(jsonable: dict) -> list[str]:
    lines = []
    for key, vec in jsonable.items():
        entries = " ".join(f"{i}={val}" for i, val in vec.items())
        lines.append(f"coalition {{{key}}}: {entries}")
    return lines


def cmd_classify(args) -> tuple[int, str]:
    graph = _load_graph(args)
    ok, witness = recognize_population_monotonic(graph)
    if not ok:
        pattern, verts = witness
        doc = {"population_monotonic": False,
               "witness": {"pattern": pattern, "vertices": list(verts)}}
        text = ["population monotonic: no",
                f"witness: {pattern} on [{', '.join(verts)}]"]
        return 1, _render(args, doc, text)
    comps, cover = classify_components(graph)
    doc = {"population_monotonic": True,
           "components": [
               {"kind": c.kind,
                "edges": sorted(c.edges),
                "cover": list(c.cover),
                "free_rider": c.free_rider,
                "pendants": {v: list(es) for v, es in sorted(c.pendants.items())}}
               for c in comps],
           "cover": list(cover.cover)}
    text = ["population monotonic: yes", f"components: {len(comps)}"]
    for pos, c in enumerate(comps):
        line = (f"component {pos}: {c.kind}; edges={sorted(c.edges)}; "
                f"cover={list(c.cover)}")
        if c.free_rider is not None:
            line += f"; free rider=edge {c.free_rider}"
        text.append(line)
    text.append(f"cover: {list(cover.cover)}")
    return 0, _render(args, doc, text)


def cmd_game_info(args) -> tuple[int, str]:
    graph = _load_graph(args)
    bipartite = is_bipartite(graph)
    try:
        nu, _ = matching_number(graph, graph.players())
        tau, _ = vertex_cover_number(graph, graph.players())
    except OracleCapError:
        nu = tau = None
    balanced = None if nu is None else (nu == tau)
    submodular = is_submodular_graph(graph)
    doc = {
        "vertices": graph.n_vertices,
        "edges": graph.n_edges,
        "bipartite": bipartite,
        "matching_number": nu,
        "cover_number": tau,
        "balanced": {"value": balanced,
                     "criterion": "matching number equals cover number"},
        "totally_balanced": {"value": bipartite, "criterion": "graph is bipartite"},
        "submodular": {"value": submodular, "criterion": "no K3 or P4 subgraph"},
    }
    if nu is None:
        doc["note"] = "exact oracle cap exceeded; matching and cover numbers omitted"

    def yesno(value) -> str:
        return "unknown (cap exceeded)" if value is None else ("yes" if value else "no")

    text = [
        f"vertices: {graph.n_vertices}",
        f"edges: {graph.n_edges}",
        f"bipartite: {yesno(bipartite)}",
        f"matching number: {'?' if nu is None else nu}",
        f"cover number: {'?' if tau is None else tau}",
        f"balanced: {yesno(balanced)} (matching number equals cover number)",
        f"totally balanced: {yesno(bipartite)} (graph is bipartite)",
        f"submodular: {yesno(submodular)} (no K3 or P4 subgraph)",
    ]
    return 0, _render(args, doc, text)


def _build_scheme(args, graph: Graph) -> AllocationScheme:
    if getattr(args, "prefs", None):
        return scheme_from_preferences(_load_prefs(graph, args.prefs))
    return construct_pmas(graph)


def cmd_construct(args) -> tuple[int, str]:
    graph = _load_graph(args)
    scheme = _build_scheme(args, graph)
    if args.materialize:
        jsonable = scheme_table_to_jsonable(scheme.materialize(max_edges=args.max_edges))
        return 0, _render(args, jsonable, _table_text_lines(jsonable))
    coalition = (_parse_coalition(args.coalition, graph)
                 if args.coalition else graph.players())
    alloc = scheme.allocation(coalition)
    doc = {str(i): fraction_str(alloc[i]) for i in sorted(alloc)}
    text = [f"edge {i}: {fraction_str(alloc[i])}" for i in sorted(alloc)]
    return 0, _render(args, doc, text)


def cmd_verify(args) -> tuple[int, str]:
    graph = _load_graph(args)
    with open(args.scheme, "r", encoding="utf-8") as handle:
        scheme = scheme_from_json(graph, handle.read())
    game = VertexCoverGame(graph)
    ok, violation = verify_pmas(game, scheme, max_edges=args.max_edges)
    if ok:
        return 0, _render(args, {"valid": True}, ["valid: yes"])
    doc = {"valid": False, "violation": violation.to_json_dict()}
    return 1, _render(args, doc, ["valid: no", str(violation)])


def cmd_enumerate(args) -> tuple[int, str]:
    graph = _load_graph(args)
    tables = []
    truncated = False
    try:
        for scheme in enumerate_integral_pmas(graph, max_enumerate=args.max_enumerate):
            tables.append(scheme_table_to_jsonable(
                scheme.materialize(max_edges=args.max_edges)))
    except EnumerationTruncated:
        truncated = True
    doc = {"count": len(tables), "truncated": truncated, "schemes": tables}
    text = [f"count: {len(tables)}", f"truncated: {'yes' if truncated else 'no'}"]
    for pos, jsonable in enumerate(tables):
        text.append(f"scheme {pos}:")
        text.extend("  " + line for line in _table_text_lines(jsonable))
    return (2 if truncated else 0), _render(args, doc, text)


def cmd_count(args) -> tuple[int, str]:
    graph = _load_graph(args)
    total = count_integral_pmas(graph)
    return 0, _render(args, {"count": total}, [str(total)])


def cmd_stable_match(args) -> tuple[int, str]:
    graph = _load_graph(args)
    if not args.prefs:
        raise ContractViolation("stable-match requires --prefs FILE")
    ps = _load_prefs(graph, args.prefs)
    coalition = (_parse_coalition(args.coalition, graph)
                 if args.coalition else graph.players())
    matched = gale_shapley(ps, coalition)
    doc = {"coalition": sorted(coalition), "matching": sorted(matched)}
    text = [f"matching: {sorted(matched)}"]
    return 0, _render(args, doc, text)


COMMANDS = {
    "classify": cmd_classify,
    "game-info": cmd_game_info,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "count": cmd_count,
    "stable-match": cmd_stable_match,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, payload = COMMANDS[args.command](args)
    except VertexCoverGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    return code
