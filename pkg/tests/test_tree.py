import math
from collections import Counter
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cayley_contours import BudgetError, DomainError
from cayley_contours.tree import (
    SubgraphHandle,
    ball_size,
    build_volume,
    distance,
    edge_list_text,
    enumerate_connected_subgraphs,
    incident_edge_boundary,
    iter_connected_vertex_sets,
    path,
    sphere_size,
    vertex_boundary,
)

import oracles

DATA = Path(__file__).parent / "data"


@pytest.mark.parametrize(
    "k, n, ball, inner_edges, halo",
    [(2, 2, 10, 9, 12), (2, 0, 1, 0, 3), (3, 2, 17, 16, 36)],
)
def test_build_volume_sizes(k, n, ball, inner_edges, halo):
    vol = build_volume(k, n)
    assert vol.interior_size == ball
    assert len(vol.edges(within=n)) == inner_edges
    assert len(vol.halo) == halo


@pytest.mark.parametrize("k, n", [(2, 0), (2, 3), (3, 2), (4, 2), (5, 1)])
def test_volume_invariants(k, n):
    vol = build_volume(k, n)
    assert oracles.bfs_sphere_sizes(vol) == [sphere_size(k, m) for m in range(n + 2)]
    assert vol.size == ball_size(k, n + 1)
    assert len(vol.neighbors(0)) == k + 1
    for v in range(1, vol.interior_size):
        assert len(vol.neighbors(v)) == k + 1
    g = nx.Graph(vol.edges())
    assert nx.is_tree(g) and g.number_of_nodes() == vol.size


def test_edge_labels_follow_rule():
    vol = build_volume(3, 2)
    assert [int(vol.label[c]) for c in vol.children(0)] == [1, 2, 3, 4]
    for v in range(1, vol.interior_size):
        got = [int(vol.label[c]) for c in vol.children(v)]
        assert got == [b for b in range(1, 5) if b != vol.label[v]]


def test_budget():
    with pytest.raises(BudgetError, match=str(ball_size(3, 11))):
        build_volume(3, 10, max_vertices=10_000)
    with pytest.raises(DomainError):
        build_volume(1, 3)


def test_distance_examples():
    vol = build_volume(2, 2)
    assert distance(vol, 0, 0) == 0
    for w in vol.sphere(2):
        assert distance(vol, 0, w) == 2
    a, b = vol.children(0)[:2]
    assert distance(vol, a, b) == 2
    assert path(vol, a, b) == [a, 0, b]
    with pytest.raises(DomainError):
        distance(vol, 0, vol.size)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_distance_matches_networkx(data):
    vol = build_volume(2, 3)
    g = nx.Graph(vol.edges())
    x = data.draw(st.integers(0, vol.size - 1))
    y = data.draw(st.integers(0, vol.size - 1))
    assert distance(vol, x, y) == distance(vol, y, x) == nx.shortest_path_length(g, x, y)


def test_vertex_boundary_examples():
    vol = build_volume(2, 3)
    assert vertex_boundary(vol, {0}) == frozenset(vol.neighbors(0))
    assert vertex_boundary(vol, set()) == frozenset()
    A = {0, 1, 2, 4, 5}  # root, two children, two grandchildren under vertex 1
    assert len(vertex_boundary(vol, A)) == 7
    with pytest.raises(DomainError):
        vertex_boundary(vol, {vol.halo.start})


def test_incident_edge_boundary_examples():
    vol2 = build_volume(2, 3)
    assert len(incident_edge_boundary(vol2, SubgraphHandle.from_vertices(vol2, {0}))) == 3
    assert len(incident_edge_boundary(vol2, SubgraphHandle.from_edges(vol2, [(0, 1)]))) == 4
    vol3 = build_volume(3, 3)
    c = vol3.children(1)[0]
    K = SubgraphHandle.from_edges(vol3, [(0, 1), (1, c)])
    brute = {e for v in K.vertices for e in vol3.edges() if v in e} - K.edges
    assert incident_edge_boundary(vol3, K) == brute
    assert len(brute) == 8
    with pytest.raises(DomainError):
        incident_edge_boundary(vol2, SubgraphHandle.from_vertices(vol2, {1, 2}))


@pytest.mark.parametrize("k", [2, 3])
def test_boundary_counts_agree_on_all_small_subgraphs(k):
    vol = build_volume(k, 5)
    for S in iter_connected_vertex_sets(vol, 0, 5):
        K = SubgraphHandle.from_vertices(vol, S)
        vb = vertex_boundary(vol, S)
        eb = incident_edge_boundary(vol, K)
        assert len(vb) == len(eb) == (k - 1) * len(S) + 2


@pytest.mark.parametrize("k, n, x, m", [(2, 6, 0, 6), (3, 4, 0, 4), (2, 6, 1, 4), (3, 4, 2, 3)])
def test_enumerator_matches_visited_set_oracle(k, n, x, m):
    vol = build_volume(k, n)
    fast = list(iter_connected_vertex_sets(vol, x, m))
    assert len(fast) == len(set(fast))
    assert set(fast) == oracles.connected_sets(vol, x, m)


def test_enumerate_connected_subgraphs_k2():
    vol = build_volume(2, 8)
    counts = enumerate_connected_subgraphs(vol, 0, 8)
    # frozen from oracles.connected_sets(vol, 0, 9)
    assert counts == {1: 3, 2: 9, 3: 28, 4: 90, 5: 297, 6: 1001, 7: 3432, 8: 11934}
    for m, c in counts.items():
        assert c <= (math.e * 2) ** m
    assert counts[2] <= 29.6
    assert enumerate_connected_subgraphs(vol, 0, 0) == {}


def test_enumerate_connected_subgraphs_small_oracle():
    vol = build_volume(3, 4)
    sets = oracles.connected_sets(vol, 0, 5)
    expected = Counter(len(s) - 1 for s in sets)
    got = enumerate_connected_subgraphs(vol, 0, 4)
    assert got == {m: expected[m] for m in range(1, 5)}


def test_enumerate_rejects_clipping():
    vol = build_volume(2, 3)
    with pytest.raises(DomainError):
        enumerate_connected_subgraphs(vol, 0, 4)
    with pytest.raises(DomainError):
        enumerate_connected_subgraphs(vol, 1, 3)


def test_edge_list_golden():
    assert edge_list_text(build_volume(2, 1)) == (DATA / "k2_n1.edges").read_text()
