"""Connectivity, reachability and path statistics over induced graphs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc
from scipy.sparse.csgraph import shortest_path

from .graph import Graph
from .jumps import RecommenderGraph, induce_social_network
from .ratings import BipartiteRatingGraph


@dataclass(frozen=True)
class ComponentSummary:
    component_count: int
    sizes: list[int]  # descending
    membership: dict[int, int]  # node -> component index, indices dense from 0
    labels: np.ndarray = field(repr=False, compare=False, default=None)  # by node position

    @property
    def non_singleton_count(self) -> int:
        return sum(1 for s in self.sizes if s > 1)

    @property
    def largest(self) -> int:
        """Index of the largest component (lowest index on ties)."""
        counts = np.bincount(self.labels, minlength=self.component_count)
        return int(np.argmax(counts))


def connected_components(s: Graph) -> ComponentSummary:
    """Undirected components.  Component indices follow first appearance in node order."""
    if s.n_nodes == 0:
        return ComponentSummary(0, [], {}, np.zeros(0, dtype=np.int64))
    n, raw = _cc(s.adjacency, directed=False)
    # relabel so that the component of the smallest node is 0, and so on
    _, first = np.unique(raw, return_index=True)
    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(n)
    labels = rank[raw]
    labels.setflags(write=False)
    sizes = sorted(np.bincount(labels, minlength=n).tolist(), reverse=True)
    return ComponentSummary(int(n), sizes, dict(zip(s.nodes.tolist(), labels.tolist())), labels)


def reachable_fractions(r: RecommenderGraph, mode: Literal["largest", "per_source"] = "largest",
                        min_raters: int = 1) -> tuple[float, float]:
    """(people_fraction, artifact_fraction) covered by the social network.

    ``largest``: fraction of people in the largest component, and fraction of
    artifacts rated by at least ``min_raters`` of its members.  ``per_source``
    averages the same two quantities over every person's own component
    (people fraction counts the *other* members, so an isolated person
    contributes 0).

    ``min_raters=2`` gives leave-one-out coverage: an artifact counts only if
    a member's rating of it could be masked and still be predicted from
    another member.
    """
    g, s = r.ratings, r.social
    n_people, n_arts = g.n_people, g.n_artifacts
    if n_people == 0 or n_arts == 0:
        return 0.0, 0.0
    comp = connected_components(s)
    # labels over all rating-graph people; anyone absent from s is a singleton
    labels = np.empty(n_people, dtype=np.int64)
    in_s = np.isin(g.people, s.nodes)
    labels[in_s] = comp.labels[np.searchsorted(s.nodes, g.people[in_s])]
    labels[~in_s] = comp.component_count + np.arange((~in_s).sum())
    n_comp = comp.component_count + int((~in_s).sum())
    counts = np.zeros((n_comp, n_arts), dtype=np.int64)
    np.add.at(counts, (labels[g.person_pos], g.artifact_pos), 1)
    covered = (counts >= min_raters).sum(axis=1) / n_arts
    sizes = np.bincount(labels, minlength=n_comp)
    if mode == "largest":
        big = int(np.argmax(sizes))
        return float(sizes[big] / n_people), float(covered[big])
    if mode == "per_source":
        if n_people == 1:
            return 0.0, float(covered[labels].mean())
        return float(((sizes[labels] - 1) / (n_people - 1)).mean()), float(covered[labels].mean())
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class PathLengthResult:
    l: int | None
    reachable: bool

    def __post_init__(self):
        if self.reachable != (self.l is not None):
            raise ValueError("l is defined exactly when reachable")


def _check_query(r: RecommenderGraph, frm, to):
    g = r.ratings
    if not r.social.has_node(frm):
        raise KeyError(f"unknown person {frm}")
    if not g.has_artifact(to):
        raise KeyError(f"unknown artifact {to}")
    raters = g.raters_of(to)
    if frm in set(raters.tolist()):
        raise ValueError(f"person {frm} rated artifact {to}; mask the rating first")
    return raters


def shortest_hammock_path(r: RecommenderGraph, frm, to) -> PathLengthResult:
    """Fewest person-person hops from ``frm`` to anyone who rated ``to``."""
    raters = _check_query(r, frm, to)
    s = r.social
    d = shortest_path(s.adjacency, directed=False, unweighted=True, indices=[s.index_of(frm)])[0]
    pos = np.searchsorted(s.nodes, raters)
    pos = pos[(pos < s.n_nodes) & (s.nodes[np.clip(pos, 0, s.n_nodes - 1)] == raters)]
    best = d[pos].min() if len(pos) else np.inf
    return PathLengthResult(int(best), True) if np.isfinite(best) else PathLengthResult(None, False)


def hammock_path_lengths(r: RecommenderGraph, queries) -> list[PathLengthResult]:
    """Batch version of :func:`shortest_hammock_path` sharing one BFS per source."""
    queries = list(queries)
    s = r.social
    sources = sorted({p for p, _ in queries})
    for p, a in queries:
        _check_query(r, p, a)
    src_pos = [s.index_of(p) for p in sources]
    dist = shortest_path(s.adjacency, directed=False, unweighted=True, indices=src_pos) if sources else None
    row_of = {p: i for i, p in enumerate(sources)}
    out = []
    for p, a in queries:
        raters = r.ratings.raters_of(a)
        d = dist[row_of[p], np.searchsorted(s.nodes, raters)].min()
        out.append(PathLengthResult(int(d), True) if np.isfinite(d) else PathLengthResult(None, False))
    return out


def sample_unrated_queries(g: BipartiteRatingGraph, n: int, seed=0) -> list[tuple[int, int]]:
    """``n`` uniformly random (person, artifact-they-did-not-rate) pairs."""
    rng = np.random.default_rng(seed)
    m = g.incidence
    out = []
    while len(out) < n:
        i = int(rng.integers(g.n_people))
        j = int(rng.integers(g.n_artifacts))
        row = m.indices[m.indptr[i]:m.indptr[i + 1]]
        k = np.searchsorted(row, j)
        if k < len(row) and row[k] == j:
            continue
        out.append((int(g.people[i]), int(g.artifacts[j])))
    return out


def multi_source_distances(adjacency, sources) -> np.ndarray:
    """Hop distance from the nearest of ``sources`` (positions) to every vertex; inf if unreachable."""
    n = adjacency.shape[0]
    dist = np.full(n, np.inf)
    frontier = np.zeros(n, dtype=bool)
    frontier[np.asarray(sources, dtype=np.int64)] = True
    level = 0
    while frontier.any():
        dist[frontier] = level
        reached = adjacency.T @ frontier.astype(np.int32) > 0
        frontier = reached & np.isinf(dist)
        level += 1
    return dist


def _distances(graph: Graph) -> np.ndarray:
    if graph.n_edges == 0:
        raise ValueError("path length is undefined on a graph with no edges")
    return shortest_path(graph.adjacency, directed=False, unweighted=True)


def average_path_length(graph: Graph) -> float:
    """Mean shortest-path distance over connected, distinct vertex pairs."""
    d = _distances(graph)
    off = ~np.eye(len(d), dtype=bool)
    finite = np.isfinite(d) & off
    return float(d[finite].mean())


def largest_component_path_length(graph: Graph) -> float:
    """Mean distance inside the largest component only."""
    comp = connected_components(graph)
    keep = np.flatnonzero(comp.labels == comp.largest)
    if len(keep) < 2:
        raise ValueError("largest component has a single vertex")
    d = shortest_path(graph.adjacency[keep][:, keep], directed=False, unweighted=True)
    return float(d[~np.eye(len(keep), dtype=bool)].mean())


def harmonic_path_length(graph: Graph) -> float:
    """Harmonic-mean distance over all distinct pairs; unreachable pairs add 0 to the mean of 1/d.

    Finite whenever the graph has an edge, and non-increasing as edges are added.
    """
    d = _distances(graph)
    n = len(d)
    with np.errstate(divide="ignore"):
        inv = 1.0 / d
    np.fill_diagonal(inv, 0.0)
    return float(n * (n - 1) / inv.sum())


LENGTHS = {
    "connected": average_path_length,
    "largest": largest_component_path_length,
    "harmonic": harmonic_path_length,
}


def path_length(graph: Graph, how: str = "connected") -> float:
    try:
        return LENGTHS[how](graph)
    except KeyError:
        raise ValueError(f"unknown path length {how!r}; expected one of {sorted(LENGTHS)}") from None


def local_clustering(graph: Graph) -> np.ndarray:
    """Per-vertex closed/possible neighbour pairs; 0 for degree < 2."""
    a = graph.adjacency
    n = graph.n_nodes
    if n == 0:
        return np.zeros(0)
    deg = graph.degrees.astype(np.float64)
    if a.nnz > 0.1 * n * n:
        dense = a.toarray().astype(np.float32)
        tri = ((dense @ dense) * dense).sum(axis=1) / 2
    else:
        a64 = a.astype(np.int64)
        tri = np.asarray((a64 @ a64).multiply(a64).sum(axis=1)).ravel() / 2
    possible = deg * (deg - 1) / 2
    out = np.zeros(n)
    ok = deg >= 2
    out[ok] = tri[ok] / possible[ok]
    return out


def clustering_coefficient(graph: Graph) -> float:
    """Watts-Strogatz clustering: mean of local clustering over all vertices."""
    if graph.n_nodes == 0:
        return 0.0
    return float(local_clustering(graph).mean())


@dataclass(frozen=True)
class GraphStatistics:
    L: float
    C: float


def graph_statistics(graph: Graph, how: str = "connected") -> GraphStatistics:
    L = path_length(graph, how) if graph.n_edges else float("nan")
    return GraphStatistics(L, clustering_coefficient(graph))


@dataclass(frozen=True)
class WidthRow:
    w: int
    component_count: int
    people_fraction: float
    artifact_fraction: float
    L: float
    C: float

    COLUMNS = ("w", "component_count", "people_fraction", "artifact_fraction", "L", "C")

    def as_row(self):
        return [self.w, self.component_count, self.people_fraction, self.artifact_fraction, self.L, self.C]


def width_statistics(g: BipartiteRatingGraph, w: int, coverage_min_raters: int = 1,
                     with_paths: bool = True) -> WidthRow:
    """One row of a hammock-width sweep."""
    s = induce_social_network(g, w)
    r = RecommenderGraph(s, g)
    comp = connected_components(s)
    pf, af = reachable_fractions(r, min_raters=coverage_min_raters)
    if with_paths:
        st = graph_statistics(s)
        L, C = st.L, st.C
    else:
        L = C = float("nan")
    return WidthRow(w, comp.component_count, pf, af, L, C)
