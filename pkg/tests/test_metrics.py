import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hammock.graph import Graph
from hammock.jumps import RecommenderGraph, induce_social_network
from hammock.metrics import (PathLengthResult, average_path_length, clustering_coefficient, connected_components,
                             graph_statistics, hammock_path_lengths, harmonic_path_length,
                             largest_component_path_length, multi_source_distances, path_length,
                             reachable_fractions, sample_unrated_queries, shortest_hammock_path, width_statistics)
from hammock.ratings import BipartiteRatingGraph

from test_jumps import shrinking_triangle


def rec(rated, w, **kw):
    g = BipartiteRatingGraph.from_sets(rated, **kw)
    return RecommenderGraph(induce_social_network(g, w), g)


def test_components_empty_graph():
    c = connected_components(Graph(range(5)))
    assert c.component_count == 5 and c.non_singleton_count == 0
    assert c.membership == {i: i for i in range(5)}


def test_component_labels_follow_node_order():
    c = connected_components(Graph.from_edges([1, 2, 3, 4], [(3, 4)]))
    assert c.membership == {1: 0, 2: 1, 3: 2, 4: 2}
    assert c.sizes == [2, 1, 1] and c.largest == 2


def test_reachable_fractions():
    r = rec({1: {1, 2}, 2: {2, 3}, 3: {3, 1}}, 1)
    assert reachable_fractions(r) == (1.0, 1.0)
    # two disjoint pairs plus an isolated person
    r = rec({1: {1, 2}, 2: {1, 2}, 3: {3}, 4: {3}, 5: {4, 5, 6}}, 1)
    pf, af = reachable_fractions(r)
    assert pf == pytest.approx(2 / 5) and af == pytest.approx(2 / 6)
    pf, af = reachable_fractions(r, min_raters=2)
    assert af == pytest.approx(2 / 6)
    pf, af = reachable_fractions(r, mode="per_source")
    assert pf == pytest.approx((4 * 1 / 4 + 0) / 5)
    assert af == pytest.approx((2 * 2 / 6 + 2 * 1 / 6 + 3 / 6) / 5)
    with pytest.raises(ValueError):
        reachable_fractions(r, mode="median")


def test_path_length_examples():
    r = rec({1: {1}, 2: {1, 2}}, 1)
    assert shortest_hammock_path(r, 1, 2) == PathLengthResult(1, True)
    r3 = RecommenderGraph(induce_social_network(shrinking_triangle(), 3), shrinking_triangle())
    assert shortest_hammock_path(r3, 1, 4) == PathLengthResult(None, False)
    r2 = RecommenderGraph(induce_social_network(shrinking_triangle(), 2), shrinking_triangle())
    assert shortest_hammock_path(r2, 1, 4).l == 1
    with pytest.raises(ValueError):
        shortest_hammock_path(r2, 1, 1)  # already rated
    with pytest.raises(KeyError):
        shortest_hammock_path(r2, 9, 4)
    with pytest.raises(ValueError):
        PathLengthResult(3, False)


def test_small_graph_lengths():
    tri = Graph.from_edges([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    path = Graph.from_edges([1, 2, 3], [(1, 2), (2, 3)])
    star = Graph.from_edges([0, 1, 2, 3], [(0, 1), (0, 2), (0, 3)])
    assert average_path_length(tri) == 1.0 and clustering_coefficient(tri) == 1.0
    assert average_path_length(path) == pytest.approx(4 / 3)
    assert clustering_coefficient(star) == 0.0
    with pytest.raises(ValueError):
        path_length(tri, "median")


def test_disconnected_lengths():
    g = Graph.from_edges(range(5), [(0, 1), (1, 2), (3, 4)])
    assert average_path_length(g) == pytest.approx((1 + 1 + 2 + 1) / 4)
    assert largest_component_path_length(g) == pytest.approx(4 / 3)
    assert harmonic_path_length(g) == pytest.approx(5 * 4 / (2 * (1 + 1 + 0.5 + 1)))
    st_ = graph_statistics(Graph(range(3)))
    assert math.isnan(st_.L) and st_.C == 0.0


def test_multi_source_distances_matches_bfs():
    nodes, edges = list(range(9)), [(0, 1), (1, 2), (2, 3), (5, 6), (6, 7), (3, 4)]
    g = Graph.from_edges(nodes, edges)
    d = multi_source_distances(g.adjacency, [0, 6])
    assert d.tolist() == [0, 1, 2, 3, 4, 1, 0, 1, math.inf]


def test_batch_matches_single():
    rated = {1: {1, 2}, 2: {2, 3}, 3: {3, 4}, 4: {4, 5}, 5: {6}}
    r = rec(rated, 1, artifacts=range(1, 7))
    qs = [(1, 5), (1, 4), (5, 1), (2, 6)]
    assert hammock_path_lengths(r, qs) == [shortest_hammock_path(r, p, a) for p, a in qs]
    assert [x.l for x in hammock_path_lengths(r, qs)] == [3, 2, None, None]


def test_sample_unrated_queries():
    g = BipartiteRatingGraph.from_sets({1: {1, 2}, 2: {2, 3}, 3: {1}})
    qs = sample_unrated_queries(g, 50, seed=3)
    assert len(qs) == 50 and all(a not in g.ratings_of(p) for p, a in qs)
    assert qs == sample_unrated_queries(g, 50, seed=3)


def test_width_statistics_row():
    row = width_statistics(shrinking_triangle(), 2)
    assert row.as_row() == [2, 1, 1.0, 1.0, 1.0, 1.0]
    row = width_statistics(shrinking_triangle(), 3, with_paths=False)
    assert row.component_count == 2 and row.people_fraction == pytest.approx(2 / 3)


rated_sets = st.dictionaries(st.integers(1, 9), st.sets(st.integers(1, 8), min_size=1, max_size=8),
                             min_size=2, max_size=9)


@settings(max_examples=100, deadline=None)
@given(rated_sets)
def test_path_length_never_grows_as_width_drops(rated):
    g = BipartiteRatingGraph.from_sets(rated, artifacts=range(1, 9))
    prev = None
    for w in range(8, 0, -1):
        r = RecommenderGraph(induce_social_network(g, w), g)
        ls = {}
        for p in rated:
            for a in range(1, 9):
                if a not in rated[p]:
                    res = shortest_hammock_path(r, p, a)
                    assert res.l == oracles.hammock_path(rated, w, p, a)
                    ls[p, a] = math.inf if res.l is None else res.l
        if prev is not None:
            assert all(ls[q] <= prev[q] for q in ls)
        prev = ls


@settings(max_examples=100, deadline=None)
@given(rated_sets)
def test_harmonic_length_non_increasing_as_edges_added(rated):
    g = BipartiteRatingGraph.from_sets(rated, artifacts=range(1, 9))
    prev = math.inf
    for w in range(8, 0, -1):
        s = induce_social_network(g, w)
        if s.n_edges:
            h = harmonic_path_length(s)
            assert h <= prev + 1e-12
            prev = h


@settings(max_examples=100, deadline=None)
@given(rated_sets, st.integers(1, 3))
def test_fractions_in_unit_interval(rated, w):
    r = rec(rated, w, artifacts=range(1, 9))
    for mode in ("largest", "per_source"):
        pf, af = reachable_fractions(r, mode=mode)
        assert 0 <= pf <= 1 and 0 <= af <= 1
    comps = connected_components(r.social)
    assert sum(comps.sizes) == len(rated)
