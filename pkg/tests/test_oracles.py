"""Package graph code against exhaustive brute force on small random graphs."""
import math
import random

import pytest

import oracles
from hammock.graph import Graph
from hammock.jumps import cooccurrence_counts, find_bridges, find_triads, induce_social_network
from hammock.metrics import (average_path_length, clustering_coefficient, connected_components,
                             harmonic_path_length)
from hammock.ratings import BipartiteRatingGraph

N_GRAPHS = 1000
N_BIPARTITE = 100


def graph_cases():
    rng = random.Random(20240601)
    return [oracles.random_graph(rng) for _ in range(N_GRAPHS)]


def bipartite_cases():
    rng = random.Random(977)
    return [oracles.random_bipartite(rng) for _ in range(N_BIPARTITE)]


def check_graph(nodes, edges):
    g = Graph.from_edges(nodes, edges)
    comps = connected_components(g)
    want = oracles.components(nodes, edges)
    assert comps.component_count == len(want)
    assert comps.sizes == [len(c) for c in want]
    for c in want:
        assert len({comps.membership[v] for v in c}) == 1
    assert set(find_bridges(g)) == oracles.bridges(nodes, edges)
    assert set(find_triads(g)) == oracles.triads(nodes, edges)
    assert clustering_coefficient(g) == pytest.approx(oracles.clustering(nodes, edges), abs=1e-12)
    if edges:
        assert average_path_length(g) == pytest.approx(oracles.average_path_length(nodes, edges), abs=1e-12)
        assert harmonic_path_length(g) == pytest.approx(oracles.harmonic_path_length(nodes, edges), abs=1e-12)
    else:
        with pytest.raises(ValueError):
            average_path_length(g)


def test_graph_oracles():
    cases = graph_cases()
    assert len(cases) >= 1000
    for nodes, edges in cases:
        check_graph(nodes, edges)


def test_cooccurrence_oracle_and_jump_monotonicity():
    cases = bipartite_cases()
    assert len(cases) >= 100
    for rated, n_a in cases:
        g = BipartiteRatingGraph.from_sets(rated, artifacts=range(1, n_a + 1))
        assert cooccurrence_counts(g) == oracles.cooccurrence(rated)
        prev = None
        for w in range(1, n_a + 2):
            s = induce_social_network(g, w)
            edges = set(s.edges())
            assert edges == oracles.hammock_edges(rated, w)
            if prev is not None:
                assert edges <= prev
            prev = edges
        assert not prev  # no pair co-rates more than n_a artifacts


def test_hammock_path_oracle():
    from hammock.jumps import RecommenderGraph
    from hammock.metrics import shortest_hammock_path
    rng = random.Random(5)
    checked = 0
    for _ in range(150):
        rated, n_a = oracles.random_bipartite(rng, max_people=8, max_artifacts=8)
        g = BipartiteRatingGraph.from_sets(rated, artifacts=range(1, n_a + 1))
        for w in (1, 2, 3):
            r = RecommenderGraph(induce_social_network(g, w), g)
            for p in rated:
                for a in range(1, n_a + 1):
                    if a in rated[p]:
                        continue
                    got = shortest_hammock_path(r, p, a)
                    want = oracles.hammock_path(rated, w, p, a)
                    assert got.l == want and got.reachable == (want is not None)
                    checked += 1
    assert checked > 1000


def test_wreath_closed_forms_against_brute_force():
    from hammock.generators import generate_wreath, wreath_clustering, wreath_path_length
    for n, k in [(8, 4), (10, 2), (12, 4), (12, 6), (11, 4), (20, 4), (24, 6)]:
        g = generate_wreath(n, k)
        nodes, edges = list(range(n)), g.edges()
        assert oracles.clustering(nodes, edges) == pytest.approx(wreath_clustering(k))
        if n % k == 0:  # the closed form for L assumes k divides n
            assert oracles.average_path_length(nodes, edges) == pytest.approx(wreath_path_length(n, k))
