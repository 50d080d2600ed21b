"""Weighted directed graphs and their adjacency, degree and Laplacian matrices.

Nodes are labelled ``1..n`` on the public surface. Matrices returned by this
module are fresh ``float64`` arrays indexed from zero, so node ``k`` lives in
row ``k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "DiGraph",
    "GraphError",
    "adjacency_matrix",
    "laplacian",
    "out_degrees",
    "in_degrees",
    "is_balanced",
    "is_undirected",
    "random_connected_digraph",
    "random_connected_undirected",
]

Edge = tuple[int, int, float]

BALANCE_TOL = 1e-12


class GraphError(ValueError):
    """Raised when a graph violates the simple-digraph invariants."""


@dataclass(frozen=True)
class DiGraph:
    """A simple weighted digraph on nodes ``1..n``.

    Parameters
    ----------
    n
        Number of nodes, at least one.
    edges
        Iterable of ``(tail, head, weight)`` triples. Self-loops, repeated
        ordered pairs and non-positive weights are rejected.
    """

    n: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"node count must be a positive integer, got {self.n!r}")
        seen = set()
        clean = []
        for edge in self.edges:
            tail, head, weight = edge
            tail, head, weight = int(tail), int(head), float(weight)
            if not (1 <= tail <= self.n and 1 <= head <= self.n):
                raise GraphError(f"edge ({tail}, {head}) has a node outside 1..{self.n}")
            if tail == head:
                raise GraphError(f"self-loop at node {tail}")
            if not (weight > 0.0 and np.isfinite(weight)):
                raise GraphError(f"edge ({tail}, {head}) has non-positive weight {weight!r}")
            if (tail, head) in seen:
                raise GraphError(f"duplicate edge ({tail}, {head})")
            seen.add((tail, head))
            clean.append((tail, head, weight))
        clean.sort()
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(clean))

    @classmethod
    def undirected(cls, n: int, edges: Iterable[Edge]) -> "DiGraph":
        """Build a graph where each ``(u, v, w)`` stands for both directions."""
        expanded = []
        for u, v, w in edges:
            expanded.append((u, v, w))
            expanded.append((v, u, w))
        return cls(n, tuple(expanded))

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        """Out-neighbour lists, zero-based and indexed by zero-based node."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for tail, head, _ in self.edges:
            out[tail - 1].append(head - 1)
        return tuple(tuple(s) for s in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for tail, head, _ in self.edges:
            inc[head - 1].append(tail - 1)
        return tuple(tuple(p) for p in inc)

    def weight(self, tail: int, head: int) -> float:
        """Weight of edge ``tail -> head``, or 0.0 if absent."""
        return self._weights.get((tail, head), 0.0)

    @cached_property
    def _weights(self) -> dict[tuple[int, int], float]:
        return {(t, h): w for t, h, w in self.edges}

    def relabel(self, perm: Sequence[int]) -> "DiGraph":
        """Return the same graph with node ``k`` renamed to ``perm[k - 1]``."""
        if sorted(perm) != list(self.nodes):
            raise GraphError("relabelling must be a permutation of 1..n")
        return DiGraph(self.n, tuple((perm[t - 1], perm[h - 1], w) for t, h, w in self.edges))

    def with_node(self, tail: int, weight: float = 1.0) -> "DiGraph":
        """Append node ``n + 1`` reached by a single edge from ``tail``."""
        return DiGraph(self.n + 1, self.edges + ((tail, self.n + 1, weight),))

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def adjacency_matrix(g: DiGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for tail, head, weight in g.edges:
        a[tail - 1, head - 1] = weight
    return a


def out_degrees(g: DiGraph) -> np.ndarray:
    return adjacency_matrix(g).sum(axis=1)


def in_degrees(g: DiGraph) -> np.ndarray:
    return adjacency_matrix(g).sum(axis=0)


def laplacian(g: DiGraph) -> np.ndarray:
    """``L = D - A`` with ``D`` the diagonal of out-degrees."""
    a = adjacency_matrix(g)
    lap = -a
    # Diagonal is the row sum so that L @ 1 vanishes term by term.
    lap[np.diag_indices(g.n)] = a.sum(axis=1)
    return lap


def is_balanced(g: DiGraph, tol: float = BALANCE_TOL) -> bool:
    a = adjacency_matrix(g)
    return bool(np.all(np.abs(a.sum(axis=1) - a.sum(axis=0)) <= tol))


def is_undirected(g: DiGraph) -> bool:
    a = adjacency_matrix(g)
    return bool(np.array_equal(a, a.T))


def random_connected_digraph(
    n: int,
    rng: np.random.Generator,
    extra_edge_prob: float = 0.25,
    weight_range: tuple[float, float] = (0.2, 3.0),
    root_has_out_edges: bool = True,
) -> DiGraph:
    """Sample a connected digraph by growing a spanning in-tree toward a root.

    Every non-root node gets one edge to a node placed earlier in a random
    order, so the root is globally reachable. Extra edges are then added
    independently with probability ``extra_edge_prob``. With
    ``root_has_out_edges=False`` the root keeps out-degree zero, making it the
    unique globally reachable node.
    """
    order = rng.permutation(n) + 1
    root = int(order[0])
    lo, hi = weight_range
    pairs = set()
    for pos in range(1, n):
        pairs.add((int(order[pos]), int(order[rng.integers(pos)])))
    for u in range(1, n + 1):
        if u == root and not root_has_out_edges:
            continue
        for v in range(1, n + 1):
            if u != v and (u, v) not in pairs and rng.random() < extra_edge_prob:
                pairs.add((u, v))
    edges = tuple((u, v, float(rng.uniform(lo, hi))) for u, v in sorted(pairs))
    return DiGraph(n, edges)


def random_connected_undirected(
    n: int,
    rng: np.random.Generator,
    extra_edge_prob: float = 0.25,
    weight_range: tuple[float, float] = (0.2, 3.0),
) -> DiGraph:
    """Random spanning tree plus extra undirected edges, symmetric weights."""
    order = rng.permutation(n) + 1
    lo, hi = weight_range
    pairs = set()
    for pos in range(1, n):
        u, v = int(order[pos]), int(order[rng.integers(pos)])
        pairs.add((min(u, v), max(u, v)))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) not in pairs and rng.random() < extra_edge_prob:
                pairs.add((u, v))
    return DiGraph.undirected(n, ((u, v, float(rng.uniform(lo, hi))) for u, v in sorted(pairs)))
