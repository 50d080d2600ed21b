"""Reachability, strong components and the subgraphs that carry resistance.

All node ids accepted and returned here are the one-based labels of the
graph being inspected. Subgraphs are relabelled ``1..m`` and carry the
original labels alongside in a :class:`Subgraph`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .graph import DiGraph

__all__ = [
    "Condensation",
    "ConnectionAnalysis",
    "Subgraph",
    "analyze_connections",
    "induced_subgraph",
    "is_connected",
    "prune_trailing_path",
    "reach",
    "reachable_subgraph",
    "sink_components",
    "strongly_connected_components",
]


@dataclass(frozen=True)
class Subgraph:
    """A relabelled piece of a larger graph.

    ``graph`` node ``i`` corresponds to ``nodes[i - 1]`` in the parent.
    """

    graph: DiGraph
    nodes: tuple[int, ...]

    def local(self, node: int) -> int:
        """Label of parent node ``node`` inside ``graph``."""
        try:
            return self.nodes.index(node) + 1
        except ValueError:
            raise KeyError(f"node {node} is not in this subgraph") from None

    def parent_edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple((self.nodes[t - 1], self.nodes[h - 1], w) for t, h, w in self.graph.edges)


@dataclass(frozen=True)
class Condensation:
    """Strong components in reverse topological order plus the DAG between them.

    ``components[c]`` is a sorted tuple of node labels; ``edges`` holds pairs
    ``(c1, c2)`` of component indices with at least one original edge from
    ``c1`` into ``c2``.
    """

    components: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]
    component_of: tuple[int, ...]

    def sinks(self) -> list[int]:
        has_out = {c1 for c1, _ in self.edges}
        return [c for c in range(len(self.components)) if c not in has_out]


def strongly_connected_components(g: DiGraph) -> Condensation:
    """Tarjan's algorithm with an explicit stack.

    Components come out sinks first, which is the order Tarjan finishes them.
    """
    n = g.n
    succ = g.successors
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    comps: list[tuple[int, ...]] = []
    counter = 0

    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            v, pos = work[-1]
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(comps)
                    members.append(w + 1)
                    if w == v:
                        break
                comps.append(tuple(sorted(members)))

    dag = {
        (comp_of[t - 1], comp_of[h - 1])
        for t, h, _ in g.edges
        if comp_of[t - 1] != comp_of[h - 1]
    }
    return Condensation(tuple(comps), frozenset(dag), tuple(comp_of))


def sink_components(g: DiGraph) -> list[tuple[int, ...]]:
    cond = strongly_connected_components(g)
    return [cond.components[c] for c in cond.sinks()]


def is_connected(g: DiGraph) -> bool:
    """True iff some node is reachable from every node.

    Equivalent to the condensation having a single sink component.
    """
    return len(strongly_connected_components(g).sinks()) == 1


def reach(g: DiGraph, sources: int | Iterable[int]) -> set[int]:
    """Breadth-first forward closure of ``sources``; sources are included."""
    if isinstance(sources, int):
        sources = (sources,)
    seen = set()
    queue = deque()
    for s in sources:
        if not 1 <= s <= g.n:
            raise ValueError(f"node {s} outside 1..{g.n}")
        if s not in seen:
            seen.add(s)
            queue.append(s)
    succ = g.successors
    while queue:
        v = queue.popleft()
        for w in succ[v - 1]:
            if w + 1 not in seen:
                seen.add(w + 1)
                queue.append(w + 1)
    return seen


def _reverse_reach(g: DiGraph, targets: Iterable[int], allowed: set[int]) -> set[int]:
    """Nodes of ``allowed`` with a path inside ``allowed`` into ``targets``."""
    seen = {t for t in targets if t in allowed}
    queue = deque(seen)
    pred = g.predecessors
    while queue:
        v = queue.popleft()
        for u in pred[v - 1]:
            if u + 1 in allowed and u + 1 not in seen:
                seen.add(u + 1)
                queue.append(u + 1)
    return seen


def induced_subgraph(g: DiGraph, nodes: Iterable[int]) -> Subgraph:
    """Subgraph on ``nodes`` with every edge of ``g`` between them."""
    keep = tuple(sorted(set(nodes)))
    pos = {v: i + 1 for i, v in enumerate(keep)}
    edges = tuple((pos[t], pos[h], w) for t, h, w in g.edges if t in pos and h in pos)
    return Subgraph(DiGraph(len(keep), edges), keep)


def reachable_subgraph(g: DiGraph, k: int, j: int) -> Subgraph:
    """Induced subgraph on everything reachable from ``k`` or ``j``."""
    return induced_subgraph(g, reach(g, (k, j)))


@dataclass(frozen=True)
class ConnectionAnalysis:
    """Where the connections between ``k`` and ``j`` live.

    ``terminal_components`` and ``subgraphs`` are parallel: subgraph ``i`` is
    everything in the connection subgraph that reaches terminal component
    ``i``.
    """

    pair: tuple[int, int]
    reachable_nodes: frozenset[int]
    connection_nodes: frozenset[int]
    connection_edges: frozenset[tuple[int, int, float]]
    terminal_components: tuple[tuple[int, ...], ...] = field(default=())
    subgraphs: tuple[Subgraph, ...] = field(default=())

    @property
    def has_connection(self) -> bool:
        return bool(self.subgraphs)


def analyze_connections(g: DiGraph, k: int, j: int) -> ConnectionAnalysis:
    """Enumerate the connection subgraphs between two distinct nodes.

    Common terminals are nodes reachable from both ``k`` and ``j``. A node is
    on a connection when it is reachable from ``k`` or ``j`` and can itself
    reach a common terminal. Each sink strong component of the resulting
    connection graph yields one connection subgraph: every connection node
    which reaches that component, with the edges between them.
    """
    if k == j:
        raise ValueError("connection analysis needs two distinct nodes")
    from_k = reach(g, k)
    from_j = reach(g, j)
    reachable = from_k | from_j
    common = from_k & from_j
    conn_nodes = _reverse_reach(g, common, reachable)
    conn_edges = frozenset(
        (t, h, w) for t, h, w in g.edges if t in conn_nodes and h in conn_nodes
    )
    if not conn_nodes:
        return ConnectionAnalysis((k, j), frozenset(reachable), frozenset(), frozenset())

    core = induced_subgraph(g, conn_nodes)
    cond = strongly_connected_components(core.graph)
    terminals = []
    subgraphs = []
    for c in sorted(cond.sinks(), key=lambda c: core.nodes[cond.components[c][0] - 1]):
        comp = tuple(core.nodes[v - 1] for v in cond.components[c])
        terminals.append(comp)
        subgraphs.append(induced_subgraph(g, _reverse_reach(g, comp, conn_nodes)))
    return ConnectionAnalysis(
        (k, j),
        frozenset(reachable),
        frozenset(conn_nodes),
        conn_edges,
        tuple(terminals),
        tuple(subgraphs),
    )


def prune_trailing_path(g: DiGraph, k: int, j: int) -> Subgraph:
    """Strip directed tails hanging off the root without touching ``k`` or ``j``.

    A node ``v`` is removable when it has no out-edges, exactly one in-edge
    ``(u, v)``, and that edge is the only out-edge of ``u``. Removal then
    leaves ``u`` as the unique root, so resistances among the remaining
    nodes are unchanged. Lowest label goes first; the loop runs to a fixed
    point.
    """
    alive = set(g.nodes)
    out_deg = {v: len(g.successors[v - 1]) for v in alive}
    in_from = {v: [u + 1 for u in g.predecessors[v - 1]] for v in alive}
    protected = {k, j}

    def removable(v: int) -> bool:
        if v in protected or out_deg[v] != 0 or len(in_from[v]) != 1:
            return False
        return out_deg[in_from[v][0]] == 1

    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if removable(v):
                u = in_from[v][0]
                alive.discard(v)
                out_deg[u] -= 1
                changed = True
                break
    return induced_subgraph(g, alive)
