# File: tests/test_confgraph.py

import io

import numpy as np
import pytest

from src.confgraph.dimacs import export_dimacs, read_dimacs, to_networkx
from src.confgraph.engine import ADJACENCY_THRESHOLD, build_graph, estimate_explicit_bytes
from src.confgraph.peeling import ball_pairs, independent_ball, peel
from src.errors import BadPairError, CapacityExceededError, GraphConstructionError
from src.leech.stats import pair_scan


def test_dimension_1_graph_is_one_edge(graph_of):
    G = graph_of(1)
    assert G.vertex_count == 2
    assert G.edge_count == 1
    assert G.adjacent(0, 1)


def test_dimension_2_graph_is_a_triangular_prism(graph_of):
    G = graph_of(2)
    assert G.vertex_count == 6
    assert G.edge_count == 9
    assert np.all(G.degrees() == 3)


def test_dimension_8_degrees(graph_of):
    assert np.all(graph_of(8).degrees() == 57)


@pytest.mark.parametrize("n", range(1, 11))
def test_explicit_and_implicit_agree(graph_of, n):
    explicit = graph_of(n, "explicit")
    implicit = graph_of(n, "implicit")
    v = explicit.vertex_count
    assert np.array_equal(explicit.adjacency_rows(0, v), implicit.adjacency_rows(0, v))
    assert explicit.edge_count == implicit.edge_count
    assert list(explicit.edges()) == list(implicit.edges())


@pytest.mark.parametrize("n", [16, pytest.param(22, marks=pytest.mark.slow)])
def test_modes_agree_on_random_pairs(graph_of, n):
    explicit = graph_of(n, "explicit")
    implicit = graph_of(n, "implicit")
    v = explicit.vertex_count
    rng = np.random.default_rng(n)
    us = rng.integers(0, v, size=10 ** 6)
    vs = rng.integers(0, v, size=10 ** 6)
    # CSR rows are sorted, so row-major edge keys are ascending
    src = np.repeat(np.arange(v, dtype=np.int64), np.diff(explicit.indptr))
    edge_keys = src * v + explicit.indices.astype(np.int64)
    keys = us * v + vs
    pos = np.minimum(np.searchsorted(edge_keys, keys), edge_keys.size - 1)
    in_lists = edge_keys[pos] == keys
    ips = np.einsum("ij,ij->i", implicit.vectors[us].astype(np.int16), implicit.vectors[vs].astype(np.int16))
    assert np.array_equal(in_lists, ips <= ADJACENCY_THRESHOLD)
    for u, w in zip(us[:2000].tolist(), vs[:2000].tolist()):
        assert explicit.adjacent(u, w) == implicit.adjacent(u, w)


def test_neighbor_lists_are_sorted(graph_of):
    G = graph_of(10)
    for v in range(G.vertex_count):
        nbrs = G.neighbors(v)
        assert np.all(np.diff(nbrs) > 0)
        assert v not in nbrs


def test_leech_degrees_on_sampled_vertices(M):
    G = build_graph(M, mode="implicit")
    rng = np.random.default_rng(5)
    positions = rng.choice(len(M), size=1000, replace=False)
    assert np.all(G.degrees(positions) == 4601)


def test_auto_mode_picks_implicit_for_full_set(M):
    assert estimate_explicit_bytes(M.vectors) > 3 * 1024 ** 3
    assert build_graph(M, mode="auto").mode == "implicit"


def test_budget_exceeded(M_n):
    with pytest.raises(CapacityExceededError):
        build_graph(M_n(8), mode="explicit", mem_budget=1000)


def test_bad_mode_and_empty_set(M_n):
    with pytest.raises(ValueError):
        build_graph(M_n(2), mode="dense")
    empty = M_n(2).subset(np.zeros(6, dtype=bool), dimension=2, label="empty")
    with pytest.raises(GraphConstructionError):
        build_graph(empty)


def test_induced_subgraph(graph_of):
    G = graph_of(8)
    H = G.induced(np.arange(0, 240, 2))
    assert H.vertex_count == 120
    for u in range(0, 20):
        for v in range(0, 20):
            assert H.adjacent(u, v) == G.adjacent(2 * u, 2 * v)
    assert np.array_equal(H.vertex_ids, np.arange(0, 240, 2))


def test_color_counts(graph_of):
    G = graph_of(2)
    table = G.color_counts(np.zeros(6, dtype=np.int64), 2)
    assert np.all(table[:, 0] == 3)
    assert np.all(table[:, 1] == 0)


def test_export_dimacs_dimension_1(graph_of):
    sink = io.StringIO()
    export_dimacs(graph_of(1), sink)
    assert sink.getvalue() == "p edge 2 1\ne 1 2\n"


def test_export_dimacs_dimension_2_header(graph_of):
    sink = io.StringIO()
    export_dimacs(graph_of(2), sink)
    lines = sink.getvalue().splitlines()
    assert lines[0] == "p edge 6 9"
    assert len(lines) == 10


@pytest.mark.parametrize("mode", ["explicit", "implicit"])
def test_dimacs_reimport_reproduces_adjacency(graph_of, mode):
    G = graph_of(8, mode)
    sink = io.StringIO()
    export_dimacs(G, sink)
    H = read_dimacs(io.StringIO(sink.getvalue()))
    E = graph_of(8, "explicit")
    assert H.edge_count == 240 * 57 // 2
    assert np.array_equal(H.indptr, E.indptr)
    assert np.array_equal(H.indices, E.indices)


def test_read_dimacs_errors():
    from src.errors import FileFormatError

    with pytest.raises(FileFormatError):
        read_dimacs(io.StringIO("e 1 2\n"))
    with pytest.raises(FileFormatError):
        read_dimacs(io.StringIO("p edge 2 1\ne 1 3\n"))
    G = read_dimacs(io.StringIO("c comment\np edge 3 0\n"))
    assert G.vertex_count == 3 and G.edge_count == 0


def test_to_networkx(graph_of):
    nxg = to_networkx(graph_of(2))
    assert nxg.number_of_nodes() == 6
    assert nxg.number_of_edges() == 9


def test_independent_ball_in_the_full_set(M):
    u, v = next(ball_pairs(M))
    ball = independent_ball(M, u, v)
    assert len(ball) == 11730
    scan = pair_scan(M.vectors[ball.members])
    assert scan.min_ip == -8


@pytest.mark.slow
def test_ten_independent_balls(M):
    pairs = ball_pairs(M)
    for _ in range(10):
        u, v = next(pairs)
        ball = independent_ball(M, u, v)
        assert len(ball) == 11730
        assert pair_scan(M.vectors[ball.members]).min_ip == -8


def test_independent_ball_needs_a_pair_at_minus_8(M):
    x = M.vectors[0]
    with pytest.raises(BadPairError):
        independent_ball(M, 0, M.position(-x))
    with pytest.raises(BadPairError):
        independent_ball(M, 0, 0)


def test_peel_zero_returns_graph_unchanged(graph_of):
    G = graph_of(8)
    sets, residual = peel(G, 0)
    assert sets == []
    assert residual is G


def test_peel_full_set_first_ball(M):
    G = build_graph(M, mode="implicit")
    sets, residual = peel(G, 1)
    assert len(sets) == 1
    assert len(sets[0]) == 11730
    assert residual.vertex_count == len(M) - 11730


def test_peeled_sets_are_independent_and_disjoint(graph_of):
    G = graph_of(16)
    sets, residual = peel(G, 3)
    assert 0 < len(sets) <= 3
    seen = set()
    for ball in sets:
        assert len(ball) < 11730
        members = set(ball.members.tolist())
        assert not members & seen
        seen |= members
        sub = G.induced(ball.members)
        assert sub.edge_count == 0
    assert residual.vertex_count == G.vertex_count - len(seen)
