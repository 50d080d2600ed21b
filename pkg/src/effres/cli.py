"""Command-line front end.

Input is a plain edge list::

    # comment
    nodes 4
    4 3 1.0
    2 1 1.0 undirected

Results go to stdout as JSON (default) or CSV; diagnostics go to stderr.
Exit status is 0 on success, 1 when a computation fails (for instance a
disconnected graph where a connected one is required) and 2 on bad input.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Any, Sequence

from .graph import DiGraph, GraphError
from .numerics import METHODS, LinAlgError
from .numerics.lyapunov import DEFAULT_TOL
from .resistance import (
    GeneralResistance,
    NotConnectedError,
    QuadratureError,
    ResistanceKind,
    build_pipeline,
    check_metric,
    general_resistance,
    general_resistance_matrix,
    h2_norm,
    kirchhoff_index,
    reduced_subgraph,
)
from .structure import analyze_connections

__all__ = ["EdgeListError", "UsageError", "format_edge_list", "main", "parse_edge_list", "run"]

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_INPUT = 2


class UsageError(ValueError):
    """Bad command arguments, such as a node id outside the graph."""


class EdgeListError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise EdgeListError(line, f"{what} {token!r} is not an integer") from None


def parse_edge_list(text: str) -> DiGraph:
    """Parse the edge-list format into a :class:`DiGraph`.

    Raises
    ------
    EdgeListError
        With the offending line number for a missing ``nodes`` header, a
        node id out of range, a non-positive weight, a repeated ordered pair
        or a self-loop.
    """
    n = None
    edges: list[tuple[int, int, float]] = []
    origin: dict[tuple[int, int], int] = {}

    def add(u: int, v: int, w: float, lineno: int) -> None:
        if (u, v) in origin:
            raise EdgeListError(lineno, f"duplicate edge ({u}, {v}), first given on line {origin[(u, v)]}")
        origin[(u, v)] = lineno
        edges.append((u, v, w))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if tokens[0] != "nodes" or len(tokens) != 2:
                raise EdgeListError(lineno, "expected 'nodes <N>' before any edge")
            n = _parse_int(tokens[1], lineno, "node count")
            if n < 1:
                raise EdgeListError(lineno, f"node count must be positive, got {n}")
            continue
        if tokens[0] == "nodes":
            raise EdgeListError(lineno, "'nodes' header given twice")
        if len(tokens) not in (3, 4) or (len(tokens) == 4 and tokens[3] != "undirected"):
            raise EdgeListError(lineno, "expected '<u> <v> <w>' or '<u> <v> <w> undirected'")
        u = _parse_int(tokens[0], lineno, "node id")
        v = _parse_int(tokens[1], lineno, "node id")
        try:
            w = float(tokens[2])
        except ValueError:
            raise EdgeListError(lineno, f"weight {tokens[2]!r} is not a number") from None
        for node in (u, v):
            if not 1 <= node <= n:
                raise EdgeListError(lineno, f"node id {node} outside 1..{n}")
        if u == v:
            raise EdgeListError(lineno, f"self-loop at node {u}")
        if not (w > 0.0 and w != float("inf")):
            raise EdgeListError(lineno, f"weight must be a positive finite number, got {tokens[2]}")
        add(u, v, w, lineno)
        if len(tokens) == 4:
            add(v, u, w, lineno)
    if n is None:
        raise EdgeListError(max(1, len(text.splitlines())), "missing 'nodes <N>' header")
    return DiGraph(n, tuple(edges))


def format_edge_list(g: DiGraph, comments: Sequence[str] = ()) -> str:
    """Inverse of :func:`parse_edge_list`; every edge is written as directed."""
    out = io.StringIO()
    for c in comments:
        out.write(f"# {c}\n")
    out.write(f"nodes {g.n}\n")
    for tail, head, weight in g.edges:
        out.write(f"{tail} {head} {weight!r}\n")
    return out.getvalue()


def _json_value(res: GeneralResistance) -> Any:
    if res.kind is ResistanceKind.FINITE:
        return res.value
    if res.kind is ResistanceKind.INFINITE:
        return "inf"
    return {"undefined": res.subgraph_nodes()}


def _csv_value(res: GeneralResistance) -> str:
    if res.kind is ResistanceKind.FINITE:
        return repr(res.value)
    return "inf" if res.kind is ResistanceKind.INFINITE else "undefined"


def _check_node(g: DiGraph, node: int) -> None:
    if not 1 <= node <= g.n:
        raise UsageError(f"node {node} outside 1..{g.n}")


def _pipeline_options(args: argparse.Namespace) -> dict[str, Any]:
    return {"solver": args.solver, "tol": args.tol, "q_variant": args.q, "seed": args.seed}


def _cmd_pair(g, args, fmt):
    _check_node(g, args.k)
    _check_node(g, args.j)
    res = general_resistance(g, args.k, args.j, **_pipeline_options(args))
    if fmt == "csv":
        return [("k", "j", "r"), (args.k, args.j, _csv_value(res))]
    return _json_value(res)


def _cmd_matrix(g, args, fmt):
    table = general_resistance_matrix(g, **_pipeline_options(args))
    if fmt == "csv":
        rows = [("k", "j", "r")]
        for a in range(g.n):
            for b in range(g.n):
                rows.append((a + 1, b + 1, _csv_value(table[a][b])))
        return rows
    return [[_json_value(cell) for cell in row] for row in table]


def _scalar(name, value, fmt):
    if fmt == "csv":
        return [("quantity", "value"), (name, repr(value))]
    return value


def _cmd_kirchhoff(g, args, fmt):
    return _scalar("kirchhoff", kirchhoff_index(build_pipeline(g, **_pipeline_options(args))), fmt)


def _cmd_h2(g, args, fmt):
    return _scalar("h2", h2_norm(build_pipeline(g, **_pipeline_options(args))), fmt)


def _subgraph_payload(sub, k, j, extra=None):
    comment = "original ids: " + " ".join(str(v) for v in sub.nodes)
    payload = {
        "nodes": list(sub.nodes),
        "pair": [sub.local(k), sub.local(j)],
        "edge_list": format_edge_list(sub.graph, [comment]),
    }
    if extra:
        payload.update(extra)
    return payload


def _cmd_reduce(g, args, fmt):
    _check_node(g, args.k)
    _check_node(g, args.j)
    sub = reduced_subgraph(g, args.k, args.j)
    if fmt == "csv":
        return [("tail", "head", "weight")] + [(t, h, repr(w)) for t, h, w in sub.parent_edges()]
    return _subgraph_payload(sub, args.k, args.j)


def _cmd_subgraphs(g, args, fmt):
    _check_node(g, args.k)
    _check_node(g, args.j)
    if args.k == args.j:
        raise UsageError("subgraphs needs two distinct nodes")
    analysis = analyze_connections(g, args.k, args.j)
    if fmt == "csv":
        rows = [("subgraph", "tail", "head", "weight")]
        for i, sub in enumerate(analysis.subgraphs, start=1):
            rows.extend((i, t, h, repr(w)) for t, h, w in sub.parent_edges())
        return rows
    return [
        _subgraph_payload(sub, args.k, args.j, {"terminal": list(term)})
        for sub, term in zip(analysis.subgraphs, analysis.terminal_components)
    ]


def _cmd_check_metric(g, args, fmt):
    report = check_metric(build_pipeline(g, **_pipeline_options(args)))
    if not report.sqrt_is_metric:
        args.failed = True
    if fmt == "csv":
        return [
            ("check", "value"),
            ("nonnegative", str(report.nonnegative).lower()),
            ("definite", str(report.definite).lower()),
            ("symmetric", str(report.symmetric).lower()),
            ("sqrt_triangle_violations", str(len(report.sqrt_triangle_violations))),
            ("triangle_violations", str(len(report.triangle_violations))),
            ("sqrt_is_metric", str(report.sqrt_is_metric).lower()),
            ("resistance_is_metric", str(report.resistance_is_metric).lower()),
        ]
    return {
        "nonnegative": report.nonnegative,
        "definite": report.definite,
        "symmetric": report.symmetric,
        "sqrt_is_metric": report.sqrt_is_metric,
        "resistance_is_metric": report.resistance_is_metric,
        "sqrt_triangle_violations": [list(v) for v in report.sqrt_triangle_violations],
        "triangle_violations": [list(v) for v in report.triangle_violations],
    }


COMMANDS = {
    "pair": _cmd_pair,
    "matrix": _cmd_matrix,
    "kirchhoff": _cmd_kirchhoff,
    "h2": _cmd_h2,
    "reduce": _cmd_reduce,
    "subgraphs": _cmd_subgraphs,
    "check-metric": _cmd_check_metric,
}


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--input", default=d("-"), help="edge-list file, '-' for stdin (default)")
    parser.add_argument("--solver", choices=METHODS, default=d("bartels-stewart"))
    parser.add_argument("--tol", type=float, default=d(DEFAULT_TOL), help="relative Lyapunov residual tolerance")
    parser.add_argument("--format", choices=("json", "csv"), default=d("json"))
    parser.add_argument("--q", choices=("deterministic", "random"), default=d("deterministic"))
    parser.add_argument("--seed", type=int, default=d(0), help="seed for --q random")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="effres", description="Effective resistance on directed graphs.")
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("pair", "reduce", "subgraphs"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("k", type=int)
        p.add_argument("j", type=int)
    sub.add_parser("matrix", parents=[common], help="all-pairs resistance")
    sub.add_parser("kirchhoff", parents=[common], help="Kirchhoff index (connected graphs)")
    sub.add_parser("h2", parents=[common], help="H2 norm of consensus (connected graphs)")
    sub.add_parser("check-metric", parents=[common], help="metric axioms over all triples")
    return parser


def _render(args, value, n) -> str:
    if args.format == "csv":
        return "".join(",".join(str(c) for c in row) + "\n" for row in value)
    return json.dumps({"n": n, "command": args.command, "result": value}, allow_nan=False) + "\n"


def run(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status instead of exiting."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT

    try:
        if args.input == "-":
            text = stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        g = parse_edge_list(text)
    except (OSError, UnicodeDecodeError, EdgeListError, GraphError) as exc:
        print(f"effres: {exc}", file=stderr)
        return EXIT_INPUT

    try:
        value = COMMANDS[args.command](g, args, args.format)
    except UsageError as exc:
        print(f"effres: {exc}", file=stderr)
        return EXIT_INPUT
    except (NotConnectedError, LinAlgError, QuadratureError) as exc:
        print(f"effres: {exc}", file=stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print(f"effres: {exc}", file=stderr)
        return EXIT_COMPUTE
    stdout.write(_render(args, value, g.n))
    # check-metric still prints its report when the square-root metric fails.
    return EXIT_COMPUTE if getattr(args, "failed", False) else EXIT_OK


def main() -> None:
    sys.exit(run())
