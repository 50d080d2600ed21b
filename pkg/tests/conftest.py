import numpy as np
import pytest

from effres.graph import DiGraph, random_connected_digraph, random_connected_undirected


def make_t3() -> DiGraph:
    return DiGraph(3, [(2, 1, 1.0), (2, 3, 1.0), (3, 1, 0.1)])


def make_path4() -> DiGraph:
    return DiGraph(4, [(4, 3, 1.0), (3, 2, 1.0), (2, 1, 1.0)])


def make_line4() -> DiGraph:
    return DiGraph(4, [(4, 3, 1.0), (3, 2, 1.0), (2, 1, 1.0), (1, 2, 1.0)])


def make_w4() -> DiGraph:
    return DiGraph(4, [(3, 1, 1.0), (4, 1, 1.0), (3, 2, 1.0), (4, 2, 1.0)])


def digraph_corpus(count: int, n_max: int, seed: int, min_n: int = 2, **kw) -> list[DiGraph]:
    rng = np.random.default_rng(seed)
    return [random_connected_digraph(int(rng.integers(min_n, n_max + 1)), rng, **kw) for _ in range(count)]


def undirected_corpus(count: int, n_max: int, seed: int, min_n: int = 2) -> list[DiGraph]:
    rng = np.random.default_rng(seed)
    return [random_connected_undirected(int(rng.integers(min_n, n_max + 1)), rng) for _ in range(count)]


def rooted_at_one(g: DiGraph) -> DiGraph:
    """Relabel a graph with a single out-degree-zero root so the root is node 1."""
    roots = [v for v in g.nodes if not g.successors[v - 1]]
    assert len(roots) == 1
    root = roots[0]
    perm = list(g.nodes)
    perm[root - 1], perm[0] = 1, root
    return g.relabel(perm)


@pytest.fixture
def t3():
    return make_t3()


@pytest.fixture
def path4():
    return make_path4()


@pytest.fixture
def line4():
    return make_line4()


@pytest.fixture
def w4():
    return make_w4()


def appended_block_deviation(g1: DiGraph, weight: float, q1=None) -> dict[str, float]:
    """Append a node to the root (node 1) of ``g1`` and compare the block solution.

    Uses the block basis ``[[Q1, 0], [alpha 1^T, -beta]]`` and returns the max
    deviation of each block of the solved covariance from its closed form.
    """
    from effres.graph import laplacian
    from effres.numerics import QBasis, build_q
    from effres.resistance import build_pipeline

    n1 = g1.n
    q1 = q1 or build_q(n1)
    p1 = build_pipeline(g1, q=q1)
    alpha = 1.0 / np.sqrt(n1 * (n1 + 1))
    beta = n1 / np.sqrt(n1 * (n1 + 1))
    q = np.zeros((n1, n1 + 1))
    q[: n1 - 1, :n1] = q1.q
    q[n1 - 1, :n1] = alpha
    q[n1 - 1, n1] = -beta
    g = g1.with_node(1, weight)
    p = build_pipeline(g, q=QBasis(q))

    sigma1 = p1.sigma
    e1 = np.zeros(n1)
    e1[0] = 1.0
    qe = q1.q @ e1
    s = p.sigma[: n1 - 1, : n1 - 1]
    t = p.sigma[: n1 - 1, n1 - 1]
    u = p.sigma[n1 - 1, n1 - 1]
    t_formula = -n1 * alpha * sigma1 @ qe
    row = np.ones(n1) @ laplacian(g1) + weight * e1
    u_formula = n1 / (2 * weight) + (n1**2 * alpha**2 / weight) * row @ q1.q.T @ sigma1 @ qe
    return {
        "S": float(np.abs(s - sigma1).max()),
        "t": float(np.abs(t - t_formula).max()),
        "u": float(abs(u - u_formula)),
        "q": float(np.abs(q @ q.T - np.eye(n1)).max()),
    }
