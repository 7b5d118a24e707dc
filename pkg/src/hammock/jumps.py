"""Skip/hammock jumps: inducing social and recommender graphs from ratings.

A hammock jump of width ``w`` joins two people who rated at least ``w``
artifacts in common; a skip jump is the ``w = 1`` case.  The induced social
network keeps every person (isolated ones included) and labels each edge with
the exact co-rating count.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .graph import Graph, write_edge_tsv
from .ratings import BipartiteRatingGraph


@dataclass(frozen=True)
class JumpSpec:
    kind: Literal["skip", "hammock"]
    width: int = 1

    def __post_init__(self):
        if self.kind not in ("skip", "hammock"):
            raise ValueError(f"unknown jump kind {self.kind!r}")
        if int(self.width) != self.width or self.width < 1:
            raise ValueError("jump width must be an integer >= 1")
        if (self.kind == "skip") != (self.width == 1):
            raise ValueError("a skip jump is exactly a hammock of width 1")

    @classmethod
    def skip(cls):
        return cls("skip", 1)

    @classmethod
    def hammock(cls, width: int):
        return cls("skip" if width == 1 else "hammock", width)


def _as_jump(jump) -> JumpSpec:
    return jump if isinstance(jump, JumpSpec) else JumpSpec.hammock(int(jump))


def cooccurrence_arrays(g: BipartiteRatingGraph):
    """Upper-triangle co-rating counts as position arrays ``(i, j, count)``, i < j.

    Accumulated per artifact (every pair of raters of an artifact gains one)
    which is exactly the incidence product B Bᵀ.  Cached on ``g``.
    """
    cached = g.__dict__.get("_cooccurrence")
    if cached is not None:
        return cached
    b = g.incidence
    c = sp.triu(b @ b.T, k=1).tocoo()
    order = np.lexsort((c.col, c.row))
    out = (c.row[order].astype(np.int64), c.col[order].astype(np.int64), c.data[order].astype(np.int64))
    for a in out:
        a.setflags(write=False)
    g.__dict__["_cooccurrence"] = out
    return out


def cooccurrence_counts(g: BipartiteRatingGraph) -> dict[tuple[int, int], int]:
    """{(person_a, person_b): common_count} for every pair with a < b and count >= 1."""
    i, j, c = cooccurrence_arrays(g)
    return dict(zip(zip(g.people[i].tolist(), g.people[j].tolist()), c.tolist()))


class SocialNetworkGraph(Graph):
    """People-only graph induced by a jump; edge weight = common-rating count."""

    def __init__(self, nodes, src=(), dst=(), weight=None, width=1):
        super().__init__(nodes, src, dst, weight)
        self.width = int(width)

    def common_count(self, u, v) -> int:
        lo, hi = min(u, v), max(u, v)
        k = np.searchsorted(self.src, lo, side="left")
        end = np.searchsorted(self.src, lo, side="right")
        row = self.dst[k:end]
        m = np.searchsorted(row, hi)
        if m < len(row) and row[m] == hi:
            return int(self.weight[k + m])
        return 0

    @property
    def people(self):
        return self.nodes

    def edge_subgraph(self, mask) -> "SocialNetworkGraph":
        return SocialNetworkGraph(self.nodes, self.src[mask], self.dst[mask], self.weight[mask], self.width)


def induce_social_network(g: BipartiteRatingGraph, jump) -> SocialNetworkGraph:
    """Edge (u, v) iff u and v co-rated at least ``jump.width`` artifacts."""
    jump = _as_jump(jump)
    i, j, c = cooccurrence_arrays(g)
    keep = c >= jump.width
    return SocialNetworkGraph(g.people, g.people[i[keep]], g.people[j[keep]], c[keep], width=jump.width)


class RecommenderGraph:
    """A social network with the rated artifacts reattached.

    Person-person edges are traversable in both directions; every rating is
    a person -> artifact arc.  Path queries go person -> ... -> person ->
    artifact.
    """

    def __init__(self, social: SocialNetworkGraph, ratings: BipartiteRatingGraph):
        missing = ~np.isin(social.nodes, ratings.people)
        if missing.any():
            raise ValueError(f"person {int(social.nodes[missing][0])} of the social network "
                             f"has no entry in the rating graph")
        self.social = social
        self.ratings = ratings

    @property
    def width(self):
        return self.social.width

    def __repr__(self):
        return f"RecommenderGraph(width={self.width}, social={self.social!r}, ratings={self.ratings!r})"

    def person_successors(self, p) -> np.ndarray:
        return self.social.neighbors(p)

    def artifact_successors(self, p) -> np.ndarray:
        return self.ratings.artifacts_of(p)

    def arcs(self):
        """All directed arcs: ('P', u, 'P', v) and ('P', p, 'A', a)."""
        for u, v in self.social.edges():
            yield ("P", u, "P", v)
            yield ("P", v, "P", u)
        for p, a in zip(self.ratings.person.tolist(), self.ratings.artifact.tolist()):
            yield ("P", p, "A", a)

    def reachable_artifacts(self, p) -> set[int]:
        """Artifacts reachable from ``p`` over any number of person hops (own ratings included)."""
        seen = {p}
        stack = [p]
        while stack:
            u = stack.pop()
            if not self.social.has_node(u):
                continue
            for v in self.social.neighbors(u).tolist():
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        out = set()
        for u in seen:
            out.update(self.ratings.artifacts_of(u).tolist())
        return out


def build_recommender_graph(s: SocialNetworkGraph, g: BipartiteRatingGraph) -> RecommenderGraph:
    return RecommenderGraph(s, g)


def find_triads(s: Graph) -> list[tuple[int, int, int]]:
    """All triangles as ascending node triples, in lexicographic order."""
    adj = s.adjacency
    nodes = s.nodes
    out = []
    for i in range(s.n_nodes):
        row = adj.indices[adj.indptr[i]:adj.indptr[i + 1]]
        higher = row[row > i]
        for j in higher.tolist():
            rj = adj.indices[adj.indptr[j]:adj.indptr[j + 1]]
            for k in np.intersect1d(higher[higher > j], rj, assume_unique=True).tolist():
                out.append((int(nodes[i]), int(nodes[j]), int(nodes[k])))
    return out


def find_bridges(s: Graph) -> list[tuple[int, int]]:
    """Edges whose removal disconnects their endpoints (lowpoint DFS, iterative)."""
    adj = s.adjacency
    n = s.n_nodes
    disc = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    t = 0
    bridges = []
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        # frames: (node, parent, next neighbour offset)
        stack = [(root, -1, adj.indptr[root])]
        while stack:
            u, parent, k = stack[-1]
            if k < adj.indptr[u + 1]:
                stack[-1] = (u, parent, k + 1)
                v = adj.indices[k]
                if disc[v] < 0:
                    disc[v] = low[v] = t
                    t += 1
                    stack.append((v, u, adj.indptr[v]))
                elif v != parent:
                    low[u] = min(low[u], disc[v])
            else:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[u])
                    if low[u] > disc[parent]:
                        a, b = s.nodes[parent], s.nodes[u]
                        bridges.append((int(min(a, b)), int(max(a, b))))
    return sorted(bridges)


@dataclass(frozen=True)
class TieReport:
    triads: list[tuple[int, int, int]]
    bridges: list[tuple[int, int]]

    @property
    def strong_ties(self) -> set[tuple[int, int]]:
        """Edges that sit on at least one triangle."""
        out = set()
        for a, b, c in self.triads:
            out.update({(a, b), (a, c), (b, c)})
        return out


def tie_report(s: Graph) -> TieReport:
    return TieReport(find_triads(s), find_bridges(s))


def write_social_tsv(s: SocialNetworkGraph, path):
    write_edge_tsv(s, path, columns=("person_a", "person_b", "common_count"))
