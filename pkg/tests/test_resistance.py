import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effres.graph import DiGraph, laplacian, random_connected_digraph, random_connected_undirected
from effres.numerics import build_q, pseudo_inverse_sym
from effres.resistance import (
    NotConnectedError,
    QuadratureError,
    ResistanceKind,
    build_pipeline,
    check_metric,
    covariance_quadrature,
    effective_resistance,
    general_resistance,
    general_resistance_matrix,
    h2_norm,
    kirchhoff_index,
    reduced_subgraph,
    resistance_matrix,
    resistance_via_reduction,
    resistances_from_x,
)
from effres.structure import reachable_subgraph

from conftest import appended_block_deviation, rooted_at_one

T3_R13 = 20.0
T3_R12 = 131.0 / 21.0
T3_R23 = 37.0 / 7.0
T3_KF = 662.0 / 21.0


def test_t3_published_values(t3):
    p = build_pipeline(t3)
    assert effective_resistance(p, 1, 3) == pytest.approx(T3_R13, abs=1e-9)
    assert effective_resistance(p, 1, 2) == pytest.approx(T3_R12, abs=1e-9)
    assert effective_resistance(p, 2, 3) == pytest.approx(T3_R23, abs=1e-9)


def test_t3_sigma_invariants(t3):
    # Trace and determinant of a 2x2 covariance survive any change of basis.
    # Reference entries come from a brute-force vectorised solve.
    ref = np.array([[1.321428, 1.986359], [1.986359, 3.932538]])
    for variant, seed in (("deterministic", None), ("random", 4)):
        sigma = build_pipeline(t3, q_variant=variant, seed=seed).sigma
        assert np.trace(sigma) == pytest.approx(np.trace(ref), abs=1e-5)
        assert np.linalg.det(sigma) == pytest.approx(np.linalg.det(ref), abs=1e-5)
    assert np.trace(build_pipeline(t3).sigma) == pytest.approx(T3_KF / 6, abs=1e-12)


def test_path_and_line(path4, line4):
    assert effective_resistance(build_pipeline(path4), 3, 4) == pytest.approx(2.0, abs=1e-9)
    assert effective_resistance(build_pipeline(line4), 3, 4) == pytest.approx(16.0 / 9.0, abs=1e-9)


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_two_node_directed(a):
    p = build_pipeline(DiGraph(2, [(1, 2, a)]))
    np.testing.assert_allclose(p.lbar, [[a]])
    np.testing.assert_allclose(p.sigma, [[1 / (2 * a)]])
    np.testing.assert_allclose(p.x, (1 / a) * np.array([[0.5, -0.5], [-0.5, 0.5]]), atol=1e-15)
    assert effective_resistance(p, 1, 2) == pytest.approx(2 / a)


def test_two_node_undirected():
    p = build_pipeline(DiGraph.undirected(2, [(1, 2, 1.0)]))
    assert effective_resistance(p, 1, 2) == pytest.approx(1.0)


def test_self_resistance_and_bounds(t3):
    p = build_pipeline(t3)
    for k in t3.nodes:
        assert effective_resistance(p, k, k) == 0.0
    with pytest.raises(ValueError):
        effective_resistance(p, 0, 1)
    with pytest.raises(ValueError):
        effective_resistance(p, 1, 4)


def test_resistance_matrix(t3):
    np.testing.assert_allclose(resistance_matrix(build_pipeline(DiGraph(2, [(1, 2, 1.0)]))), [[0, 2], [2, 0]])
    r = resistance_matrix(build_pipeline(t3))
    np.testing.assert_allclose(r, [[0, T3_R12, T3_R13], [T3_R12, 0, T3_R23], [T3_R13, T3_R23, 0]], atol=1e-9)


def test_kirchhoff_and_h2(t3):
    p = build_pipeline(t3)
    assert kirchhoff_index(p) == pytest.approx(T3_KF, abs=1e-9)
    assert h2_norm(p) == pytest.approx(math.sqrt(662.0 / 126.0), abs=1e-9)
    p2 = build_pipeline(DiGraph(2, [(1, 2, 1.0)]))
    assert kirchhoff_index(p2) == pytest.approx(2.0)
    assert h2_norm(p2) == pytest.approx(1 / math.sqrt(2))


def test_not_connected_raises():
    with pytest.raises(NotConnectedError) as info:
        build_pipeline(DiGraph(3, [(1, 2, 1.0)]))
    assert info.value.sinks is not None and len(info.value.sinks) == 2


def test_single_node_pipeline():
    p = build_pipeline(DiGraph(1))
    assert effective_resistance(p, 1, 1) == 0.0
    assert kirchhoff_index(p) == 0.0


def test_undirected_matches_pseudoinverse():
    rng = np.random.default_rng(2)
    for _ in range(10):
        g = random_connected_undirected(int(rng.integers(2, 10)), rng)
        x = build_pipeline(g).x
        assert np.abs(x - pseudo_inverse_sym(laplacian(g))).max() <= 1e-9


# -- general resistance ----------------------------------------------------


def test_general_infinite():
    res = general_resistance(DiGraph(2), 1, 2)
    assert res.kind is ResistanceKind.INFINITE and res.value is None


def test_general_undefined(w4):
    res = general_resistance(w4, 3, 4)
    assert res.kind is ResistanceKind.UNDEFINED
    assert res.subgraph_nodes() == [[1, 3, 4], [2, 3, 4]]


def test_general_single_subgraph(w4):
    # 1 and 3 share only terminal 1.
    res = general_resistance(w4, 1, 3)
    assert res.kind is ResistanceKind.FINITE
    assert res.value == pytest.approx(2.0)


def test_general_self_pair(w4):
    res = general_resistance(w4, 2, 2)
    assert res.is_finite and res.value == 0.0


def test_general_matches_connected(t3):
    p = build_pipeline(t3)
    for k in t3.nodes:
        for j in t3.nodes:
            res = general_resistance(t3, k, j)
            assert res.is_finite
            assert res.value == pytest.approx(effective_resistance(p, k, j), abs=1e-9)


def test_general_matrix_disconnected(w4):
    table = general_resistance_matrix(w4)
    assert table[2][3].kind is ResistanceKind.UNDEFINED
    assert table[0][1].kind is ResistanceKind.INFINITE
    assert table[0][2].value == pytest.approx(2.0)


# -- reduction -------------------------------------------------------------


def test_reduction_path4(path4):
    sub = reduced_subgraph(path4, 3, 4)
    assert sub.graph.n == 2
    assert resistance_via_reduction(path4, 3, 4) == pytest.approx(2.0, abs=1e-9)


def test_reduction_trivial_when_reachable_is_whole(t3):
    p = build_pipeline(t3)
    assert reachable_subgraph(t3, 2, 3).graph == t3
    assert resistance_via_reduction(t3, 2, 3) == pytest.approx(effective_resistance(p, 2, 3), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_reduction_preserves_resistance(n, tail, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_digraph(n, rng, root_has_out_edges=False)
    for _ in range(tail):
        root = next(v for v in g.nodes if not g.successors[v - 1])
        g = g.with_node(root, float(rng.uniform(0.3, 3.0)))
    r = resistance_matrix(build_pipeline(g))
    for k in g.nodes:
        for j in g.nodes:
            assert resistance_via_reduction(g, k, j) == pytest.approx(r[k - 1, j - 1], abs=1e-9)


# -- well-definedness and structural invariants ---------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.integers(0, 1000))
def test_independent_of_basis(n, seed, q_seed):
    g = random_connected_digraph(n, np.random.default_rng(seed))
    base = resistance_matrix(build_pipeline(g))
    other = resistance_matrix(build_pipeline(g, q_variant="random", seed=q_seed))
    assert np.abs(base - other).max() <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_independent_of_labelling(n, seed, rnd):
    g = random_connected_digraph(n, np.random.default_rng(seed))
    perm = list(range(1, n + 1))
    rnd.shuffle(perm)
    r = resistance_matrix(build_pipeline(g))
    r2 = resistance_matrix(build_pipeline(g.relabel(perm)))
    idx = np.array(perm) - 1
    assert np.abs(r2[np.ix_(idx, idx)] - r).max() <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.data())
def test_reachable_subgraph_preserves_resistance(n, seed, data):
    g = random_connected_digraph(n, np.random.default_rng(seed), extra_edge_prob=0.15)
    k = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n))
    sub = reachable_subgraph(g, k, j)
    direct = effective_resistance(build_pipeline(g), k, j)
    local = effective_resistance(build_pipeline(sub.graph), sub.local(k), sub.local(j))
    assert local == pytest.approx(direct, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.floats(0.1, 10.0), st.integers(0, 2**32 - 1))
def test_appending_to_root(n, weight, seed):
    g1 = random_connected_digraph(n, np.random.default_rng(seed), root_has_out_edges=False)
    root = next(v for v in g1.nodes if not g1.successors[v - 1])
    g = g1.with_node(root, weight)
    r1 = resistance_matrix(build_pipeline(g1))
    r = resistance_matrix(build_pipeline(g))
    assert np.abs(r[:n, :n] - r1).max() <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.floats(0.1, 10.0), st.integers(0, 2**32 - 1), st.booleans())
def test_block_solution_of_appended_graph(n, weight, seed, random_q):
    rng = np.random.default_rng(seed)
    g1 = rooted_at_one(random_connected_digraph(n, rng, root_has_out_edges=False))
    q1 = build_q(n, "random", int(rng.integers(1 << 30))) if random_q else None
    dev = appended_block_deviation(g1, weight, q1)
    assert dev["q"] <= 1e-12
    assert dev["S"] <= 1e-8 and dev["t"] <= 1e-8 and dev["u"] <= 1e-8


# -- metric ----------------------------------------------------------------


def test_metric_t3(t3):
    report = check_metric(build_pipeline(t3))
    assert report.sqrt_is_metric
    assert not report.resistance_is_metric
    assert [v[:3] for v in report.triangle_violations] == [(1, 2, 3)]
    assert report.triangle_violations[0][3] == pytest.approx(T3_R13 - T3_R12 - T3_R23, abs=1e-9)
    assert report.sqrt_triangle_violations == ()


def test_metric_undirected_both_hold():
    rng = np.random.default_rng(9)
    for _ in range(10):
        g = random_connected_undirected(int(rng.integers(2, 10)), rng)
        report = check_metric(build_pipeline(g))
        assert report.sqrt_is_metric and report.resistance_is_metric


def test_metric_two_nodes():
    report = check_metric(build_pipeline(DiGraph(2, [(1, 2, 1.0)])))
    assert report.sqrt_is_metric and report.resistance_is_metric


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_x_is_psd_with_ones_kernel(n, seed):
    p = build_pipeline(random_connected_digraph(n, np.random.default_rng(seed)))
    eig = np.linalg.eigvalsh(p.x)
    assert eig.min() >= -1e-10
    assert np.sum(np.abs(eig) <= 1e-10) == 1
    assert np.abs(p.x @ np.ones(n)).max() <= 1e-10
    assert check_metric(p).sqrt_is_metric


# -- quadrature ------------------------------------------------------------


def test_quadrature_two_nodes():
    p = build_pipeline(DiGraph(2, [(1, 2, 1.0)]))
    sig1 = covariance_quadrature(p)
    np.testing.assert_allclose(sig1, 0.5 * np.array([[0.5, -0.5], [-0.5, 0.5]]), atol=1e-7)
    assert np.trace(sig1) == pytest.approx(0.5, abs=1e-7)


def test_quadrature_matches_lyapunov():
    rng = np.random.default_rng(17)
    for _ in range(4):
        g = random_connected_digraph(int(rng.integers(2, 8)), rng)
        p = build_pipeline(g)
        sig1 = covariance_quadrature(p)
        assert np.linalg.norm(sig1 - p.q.lift(p.sigma)) <= 1e-6 * (1 + np.linalg.norm(p.sigma))
        assert np.trace(sig1) == pytest.approx(np.trace(p.sigma), abs=1e-6)


def test_quadrature_slow_decay_diagnosed():
    p = build_pipeline(DiGraph(2, [(1, 2, 1e-7)]))
    with pytest.raises(QuadratureError):
        covariance_quadrature(p, max_horizon=1e3)


# -- algebraic identities --------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 14), st.integers(0, 2**32 - 1))
def test_kirchhoff_trace_identities(n, seed):
    p = build_pipeline(random_connected_digraph(n, np.random.default_rng(seed)))
    kf = kirchhoff_index(p)
    assert kf == pytest.approx(2 * n * np.trace(p.sigma), abs=1e-9 * max(1.0, kf))
    assert h2_norm(p) ** 2 == pytest.approx(np.trace(p.sigma), abs=1e-9)
    assert h2_norm(p) ** 2 * 2 * n == pytest.approx(kf, abs=1e-9 * max(1.0, kf))


def test_resistances_from_x_symmetric_zero_diag():
    rng = np.random.default_rng(0)
    r = resistances_from_x(build_pipeline(random_connected_digraph(9, rng)).x)
    assert np.array_equal(r, r.T)
    assert np.all(np.diag(r) == 0.0)
