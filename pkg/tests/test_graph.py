import io
import json

import numpy as np
import pytest
from hypothesis import given, settings

from twistspec.errors import DisconnectedGraph, EmptyGraph, GenusZero, ParseError
from twistspec.graph import (
    Graph,
    cycle_graph,
    edge_adjacency,
    feeds_into,
    is_bipartite,
    load_graph,
    random_graph,
    spanning_tree,
    theta_graph,
    tree_bipartition,
    two_core,
)

from strategies import graphs


def test_load_k4_from_json():
    text = json.dumps({"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0], [0, 2], [1, 3]]})
    G = load_graph(text)
    assert (G.n, G.m, G.genus) == (4, 6, 3)


def test_load_accepts_stream_and_bytes():
    text = json.dumps({"vertices": 1, "edges": [[0, 0]]})
    assert load_graph(io.StringIO(text)).m == 1
    assert load_graph(text.encode()).genus == 1


def test_theta_123_shape(G1):
    assert (G1.n, G1.m, G1.genus) == (5, 6, 2)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        json.dumps({"vertices": 2}),
        json.dumps({"vertices": "2", "edges": []}),
        json.dumps({"vertices": True, "edges": []}),
        json.dumps({"vertices": 2, "edges": [[0, 1, 2]]}),
        json.dumps({"vertices": 2, "edges": [[0, 5]]}),
        json.dumps({"vertices": 2, "edges": [[0, 1.5]]}),
    ],
)
def test_malformed_input(text):
    with pytest.raises(ParseError):
        load_graph(text)


def test_empty_graph():
    with pytest.raises(EmptyGraph):
        load_graph(json.dumps({"vertices": 0, "edges": []}))


def test_isolated_vertex_is_disconnected():
    with pytest.raises(DisconnectedGraph):
        load_graph(json.dumps({"vertices": 3, "edges": [[0, 1]]}))


def test_edge_indexing_convention(K4):
    m = K4.m
    for i, (t, h) in enumerate(K4.edges):
        assert (K4.tail(i), K4.head(i)) == (t, h)
        assert (K4.tail(i + m), K4.head(i + m)) == (h, t)


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_inverse_is_an_involution(G):
    for a in range(2 * G.m):
        b = G.inverse(a)
        assert G.inverse(b) == a
        assert G.tail(b) == G.head(a)


@settings(max_examples=40, deadline=None)
@given(graphs(min_genus=0))
def test_spanning_tree_is_a_tree(G):
    T = spanning_tree(G)
    assert len(T.tree_edges) == G.n - 1
    assert len(T.non_tree_edges) == G.genus
    # union-find: tree edges never close a cycle and reach every vertex
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i in T.tree_edges:
        a, b = find(G.edges[i][0]), find(G.edges[i][1])
        assert a != b
        parent[a] = b
    assert len({find(v) for v in range(G.n)}) == 1


@settings(max_examples=40, deadline=None)
@given(graphs(min_genus=0))
def test_tree_path_endpoints(G):
    T = spanning_tree(G)
    for v in range(G.n):
        for w in range(G.n):
            path = T.path(v, w)
            if v == w:
                assert path == []
                continue
            assert G.tail(path[0]) == v and G.head(path[-1]) == w
            for a, b in zip(path, path[1:]):
                assert G.head(a) == G.tail(b)
            assert all(a % G.m in T.tree_edges for a in path)


def test_theta_tree_contains_shortest_path():
    G = theta_graph(1, 2, 3)
    T = spanning_tree(G)
    assert 0 in T.tree_edges
    assert T.non_tree_edges == (2, 4)


def test_tree_bipartition_puts_root_first(K4):
    T = spanning_tree(K4)
    v1, v2 = tree_bipartition(K4, T)
    assert 0 in v1 and v1 | v2 == frozenset(range(4)) and not v1 & v2


def test_bipartite(K4, G1, G2, G3):
    assert not is_bipartite(K4)
    assert not is_bipartite(G1)
    assert is_bipartite(G2) and is_bipartite(G3)
    assert not is_bipartite(cycle_graph(1))


def test_two_core_trims_pendant_tree():
    # triangle 0-1-2 with a pendant path 2-3-4 and a leaf on 0
    G = Graph(6, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (5, 0)))
    core, edge_map, vertex_map = two_core(G)
    assert edge_map == (0, 1, 2)
    assert vertex_map == (0, 1, 2)
    assert core.edges == ((0, 1), (1, 2), (2, 0))


def test_two_core_of_tree_is_an_error():
    with pytest.raises(GenusZero):
        two_core(Graph(3, ((0, 1), (1, 2))))


def test_two_core_keeps_loops_on_leaves():
    G = Graph(2, ((0, 1), (1, 1)))
    core, edge_map, _ = two_core(G)
    assert edge_map == (1,) and core.edges == ((0, 0),)


def test_feeds_into_excludes_backtracking(K4):
    m = K4.m
    assert feeds_into(K4, 0, 1)  # 1->2 then 2->3
    assert not feeds_into(K4, 0, m)  # 1->2 then 2->1
    assert not feeds_into(K4, 0, 2)  # heads do not meet


def test_edge_adjacency_row_sums_are_degree_minus_one(K4):
    W = edge_adjacency(K4)
    assert np.all(W.sum(axis=1) == 2)


def test_loop_feeds_into_itself_but_not_its_inverse():
    G = cycle_graph(1)
    assert feeds_into(G, 0, 0) and not feeds_into(G, 0, 1)


def test_theta_generator_validates():
    with pytest.raises(ValueError):
        theta_graph(0, 1, 2)


def test_random_graph_respects_bounds():
    rng = np.random.default_rng(5)
    for _ in range(50):
        G = random_graph(rng, 5, 8, min_genus=1, max_genus=3)
        assert G.n <= 5 and G.m <= 8 and 1 <= G.genus <= 3


def test_to_json_round_trip(G1):
    assert load_graph(G1.to_json()) == G1
