"""Effective resistance on directed graphs via the reduced-Laplacian Lyapunov equation.

For a connected digraph with Laplacian ``L`` and a basis ``Q`` of the
zero-sum vectors, the reduced Laplacian ``Lbar = Q L Q^T`` has its spectrum in
the open right half-plane. With ``Sigma`` solving
``Lbar Sigma + Sigma Lbar^T = I`` and ``X = 2 Q^T Sigma Q``, the resistance
between ``k`` and ``j`` is ``x_kk + x_jj - 2 x_kj``. Graphs without a
globally reachable node are handled pairwise through connection subgraphs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .graph import DiGraph, laplacian
from .numerics import QBasis, build_q, expm, solve_lyapunov
from .numerics.lyapunov import DEFAULT_TOL, SpectrumError
from .structure import (
    ConnectionAnalysis,
    Subgraph,
    analyze_connections,
    prune_trailing_path,
    reachable_subgraph,
    sink_components,
)

__all__ = [
    "GeneralResistance",
    "MetricReport",
    "NotConnectedError",
    "QuadratureError",
    "ResistanceKind",
    "ResistancePipeline",
    "build_pipeline",
    "check_metric",
    "covariance_quadrature",
    "effective_resistance",
    "general_resistance",
    "general_resistance_matrix",
    "h2_norm",
    "kirchhoff_index",
    "resistance_matrix",
    "reduced_subgraph",
    "resistance_via_reduction",
    "resistances_from_x",
]


class NotConnectedError(ValueError):
    """The graph has no globally reachable node.

    ``sinks`` holds two sink components that cannot reach each other.
    """

    def __init__(self, sinks: tuple[tuple[int, ...], tuple[int, ...]] | None = None, detail: str = ""):
        if sinks is not None:
            a, b = sinks
            msg = f"graph is not connected: sink components {list(a)} and {list(b)} cannot reach each other"
        else:
            msg = f"graph is not connected: {detail}"
        super().__init__(msg)
        self.sinks = sinks


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class ResistancePipeline:
    """Intermediate products for one connected graph.

    Attributes
    ----------
    graph : DiGraph
    q : QBasis
    lbar : ndarray
        Reduced Laplacian ``Q L Q^T``.
    sigma : ndarray
        Solution of ``Lbar Sigma + Sigma Lbar^T = I``.
    x : ndarray
        ``2 Q^T Sigma Q``, symmetrised.
    residual_norm : float
        Lyapunov residual of ``sigma``.
    """

    graph: DiGraph
    q: QBasis
    lbar: np.ndarray
    sigma: np.ndarray
    x: np.ndarray
    residual_norm: float = 0.0
    solver: str = "bartels-stewart"

    @property
    def n(self) -> int:
        return self.graph.n

    def _index(self, node: int) -> int:
        if not 1 <= node <= self.graph.n:
            raise ValueError(f"node {node} outside 1..{self.graph.n}")
        return node - 1


def build_pipeline(
    g: DiGraph,
    solver: str = "bartels-stewart",
    q_variant: str = "deterministic",
    seed: int | None = None,
    tol: float = DEFAULT_TOL,
    q: QBasis | None = None,
) -> ResistancePipeline:
    """Compute ``Q``, ``Lbar``, ``Sigma`` and ``X`` for a connected graph.

    An explicit ``q`` overrides ``q_variant``/``seed``.

    Raises
    ------
    NotConnectedError
        If ``g`` has more than one sink component, or the solver finds the
        reduced spectrum touching the imaginary axis.
    """
    sinks = sink_components(g)
    if len(sinks) > 1:
        raise NotConnectedError((sinks[0], sinks[1]))
    if g.n == 1:
        empty = np.zeros((0, 0))
        return ResistancePipeline(g, QBasis(np.zeros((0, 1))), empty, empty, np.zeros((1, 1)), 0.0, solver)
    if q is None:
        q = build_q(g.n, q_variant, seed)
    elif q.q.shape != (g.n - 1, g.n):
        raise ValueError(f"Q basis has shape {q.q.shape}, expected {(g.n - 1, g.n)}")
    lbar = q.reduce(laplacian(g))
    try:
        sol = solve_lyapunov(lbar, solver, tol)
    except SpectrumError as exc:
        raise NotConnectedError(detail=str(exc)) from exc
    x = 2.0 * q.lift(sol.sigma)
    x = 0.5 * (x + x.T)
    return ResistancePipeline(g, q, lbar, sol.sigma, x, sol.residual_norm, solver)


def resistances_from_x(x: np.ndarray) -> np.ndarray:
    """All-pairs ``x_kk + x_jj - 2 x_kj`` with an exact zero diagonal."""
    d = np.diag(x)
    r = d[:, None] + d[None, :] - 2.0 * x
    r = 0.5 * (r + r.T)
    np.fill_diagonal(r, 0.0)
    return r


def effective_resistance(p: ResistancePipeline, k: int, j: int) -> float:
    a, b = p._index(k), p._index(j)
    if a == b:
        return 0.0
    x = p.x
    return float(x[a, a] + x[b, b] - 2.0 * x[a, b])


def resistance_matrix(p: ResistancePipeline) -> np.ndarray:
    return resistances_from_x(p.x)


def kirchhoff_index(p: ResistancePipeline) -> float:
    """Sum of resistances over unordered node pairs."""
    r = resistance_matrix(p)
    return float(r[np.triu_indices(p.n, 1)].sum())


def h2_norm(p: ResistancePipeline) -> float:
    """``sqrt(K_f / 2N)``, equivalently ``sqrt(trace Sigma)``."""
    return float(np.sqrt(kirchhoff_index(p) / (2.0 * p.n)))


class ResistanceKind(str, enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class GeneralResistance:
    kind: ResistanceKind
    value: float | None = None
    analysis: ConnectionAnalysis | None = field(default=None, repr=False)

    @property
    def is_finite(self) -> bool:
        return self.kind is ResistanceKind.FINITE

    def subgraph_nodes(self) -> list[list[int]]:
        if self.analysis is None:
            return []
        return [list(s.nodes) for s in self.analysis.subgraphs]


def _pair_on(sub: Subgraph, k: int, j: int, **options) -> float:
    p = build_pipeline(sub.graph, **options)
    return effective_resistance(p, sub.local(k), sub.local(j))


def general_resistance(g: DiGraph, k: int, j: int, **options) -> GeneralResistance:
    """Resistance in any digraph: finite, infinite (no connection) or undefined.

    A finite value is computed on the unique connection subgraph. Keyword
    options are forwarded to :func:`build_pipeline`.
    """
    for node in (k, j):
        if not 1 <= node <= g.n:
            raise ValueError(f"node {node} outside 1..{g.n}")
    if k == j:
        return GeneralResistance(ResistanceKind.FINITE, 0.0)
    analysis = analyze_connections(g, k, j)
    if not analysis.subgraphs:
        return GeneralResistance(ResistanceKind.INFINITE, None, analysis)
    if len(analysis.subgraphs) > 1:
        return GeneralResistance(ResistanceKind.UNDEFINED, None, analysis)
    value = _pair_on(analysis.subgraphs[0], k, j, **options)
    return GeneralResistance(ResistanceKind.FINITE, value, analysis)


def general_resistance_matrix(g: DiGraph, **options) -> list[list[GeneralResistance]]:
    """Pairwise trichotomy for every ``(k, j)``; one pipeline when ``g`` is connected."""
    n = g.n
    if len(sink_components(g)) == 1:
        r = resistance_matrix(build_pipeline(g, **options))
        return [[GeneralResistance(ResistanceKind.FINITE, float(r[a, b])) for b in range(n)] for a in range(n)]
    out = [[GeneralResistance(ResistanceKind.FINITE, 0.0) for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            res = general_resistance(g, a + 1, b + 1, **options)
            out[a][b] = out[b][a] = res
    return out


def resistance_via_reduction(g: DiGraph, k: int, j: int, **options) -> float:
    """Resistance computed on the pruned reachable subgraph of ``(k, j)``."""
    sub = reduced_subgraph(g, k, j)
    if k == j:
        return 0.0
    return _pair_on(sub, k, j, **options)


def reduced_subgraph(g: DiGraph, k: int, j: int) -> Subgraph:
    """Reachable subgraph of ``(k, j)`` with trailing directed paths pruned.

    Node labels in the result refer back to ``g``.
    """
    reach_sub = reachable_subgraph(g, k, j)
    pruned = prune_trailing_path(reach_sub.graph, reach_sub.local(k), reach_sub.local(j))
    return Subgraph(pruned.graph, tuple(reach_sub.nodes[v - 1] for v in pruned.nodes))


def covariance_quadrature(
    p: ResistancePipeline,
    tail_tol: float = 1e-8,
    step_tol: float = 1e-7,
    max_horizon: float = 1e6,
    max_intervals: int = 1 << 18,
) -> np.ndarray:
    """Integrate ``Q^T exp(-Lbar t) exp(-Lbar^T t) Q`` over ``[0, T]`` by composite Simpson.

    ``T`` doubles from 1 until ``||exp(-Lbar T)||_F <= tail_tol``. The
    interval count doubles from 64 until consecutive estimates differ by at
    most ``step_tol`` in Frobenius norm.

    Raises
    ------
    QuadratureError
        If the horizon exceeds ``max_horizon`` or the rule does not settle
        within ``max_intervals``.
    """
    lbar = p.lbar
    m = lbar.shape[0]
    if m == 0:
        return np.zeros((p.n, p.n))
    horizon = 1.0
    while np.linalg.norm(expm(-lbar, horizon)) > tail_tol:
        horizon *= 2.0
        if horizon > max_horizon:
            raise QuadratureError(
                f"exp(-Lbar t) has not decayed to {tail_tol:g} by t = {max_horizon:g}; "
                "spectral abscissa too close to zero"
            )

    def simpson(count: int) -> np.ndarray:
        h = horizon / count
        step = expm(-lbar, h)
        power = np.eye(m)
        total = np.eye(m)
        for i in range(1, count + 1):
            power = power @ step
            weight = 1.0 if i == count else (4.0 if i % 2 else 2.0)
            total += weight * (power @ power.T)
        return (h / 3.0) * total

    count = 64
    prev = simpson(count)
    while True:
        count *= 2
        if count > max_intervals:
            raise QuadratureError(f"Simpson rule did not settle within {max_intervals} intervals")
        cur = simpson(count)
        if np.linalg.norm(cur - prev) <= step_tol:
            break
        prev = cur
    cur = 0.5 * (cur + cur.T)
    return p.q.lift(cur)


@dataclass(frozen=True)
class MetricReport:
    """Outcome of checking the metric axioms over all node triples.

    Triangle violations are ``(k, l, j, excess)`` with ``k < j`` meaning the
    detour through ``l`` is shorter than the direct value by ``excess``.
    """

    nonnegative: bool
    definite: bool
    symmetric: bool
    sqrt_triangle_violations: tuple[tuple[int, int, int, float], ...]
    triangle_violations: tuple[tuple[int, int, int, float], ...]

    @property
    def sqrt_is_metric(self) -> bool:
        return self.nonnegative and self.definite and self.symmetric and not self.sqrt_triangle_violations

    @property
    def resistance_is_metric(self) -> bool:
        return self.nonnegative and self.definite and self.symmetric and not self.triangle_violations


def _triangle_violations(d: np.ndarray, slack: float) -> list[tuple[int, int, int, float]]:
    n = d.shape[0]
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    found = []
    for mid in range(n):
        gap = d[:, mid][:, None] + d[mid, :][None, :] - d
        bad = (gap < -slack) & upper
        for a, b in np.argwhere(bad):
            found.append((int(a) + 1, mid + 1, int(b) + 1, float(-gap[a, b])))
    found.sort()
    return found


def check_metric(p: ResistancePipeline, slack: float = 1e-10) -> MetricReport:
    """Test positivity, definiteness, symmetry and both triangle inequalities.

    The square-root triangle inequality must hold on any connected graph;
    the plain one may fail on directed graphs and is only reported.
    """
    d = np.diag(p.x)
    raw = d[:, None] + d[None, :] - 2.0 * p.x
    n = p.n
    off = ~np.eye(n, dtype=bool)
    nonneg = bool(raw.min() >= -slack)
    definite = bool(np.all(raw[off] > 0.0) and np.all(np.abs(np.diag(raw)) <= slack))
    symmetric = bool(np.all(np.abs(raw - raw.T) <= slack))
    r = resistances_from_x(p.x)
    root = np.sqrt(np.clip(r, 0.0, None))
    return MetricReport(
        nonneg,
        definite,
        symmetric,
        tuple(_triangle_violations(root, slack)),
        tuple(_triangle_violations(r, slack)),
    )
