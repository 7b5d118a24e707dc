"""Synthetic worlds: Watts-Strogatz wreaths and the three-community rating dataset."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .ratings import BipartiteRatingGraph


@dataclass(frozen=True)
class WattsStrogatzConfig:
    n: int = 1000
    k: int = 10
    p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        _check_wreath(self.n, self.k)
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"rewiring probability {self.p} outside [0, 1]")


def _check_wreath(n, k):
    if k <= 0 or k % 2:
        raise ValueError(f"k must be a positive even integer, got {k}")
    if k >= n:
        raise ValueError(f"k must be smaller than n (k={k}, n={n})")


def _lattice_edges(n, k):
    # lap by lap: all (u, u+1), then all (u, u+2), ...; this is the rewiring order
    return [(u, (u + j) % n) for j in range(1, k // 2 + 1) for u in range(n)]


def generate_wreath(n: int, k: int) -> Graph:
    """Ring lattice on nodes 0..n-1, each joined to its k/2 nearest neighbours per side."""
    _check_wreath(n, k)
    e = np.array(_lattice_edges(n, k), dtype=np.int64)
    return Graph(np.arange(n), e[:, 0], e[:, 1])


def _wreath_k(g: Graph) -> int:
    n = g.n_nodes
    if n == 0 or not np.array_equal(g.nodes, np.arange(n)):
        raise ValueError("not a wreath: nodes must be 0..n-1")
    k = int(g.degrees[0])
    if g != generate_wreath(n, k):
        raise ValueError("not a wreath")
    return k


def rewire(g: Graph, p: float, seed=0) -> Graph:
    """Watts-Strogatz rewiring of a wreath.

    Lap by lap around the ring, each lattice edge (u, u+j) keeps ``u`` and with
    probability ``p`` moves its far end to a uniformly drawn vertex, redrawing
    on self-loops and existing edges.  Edge count is preserved.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rewiring probability {p} outside [0, 1]")
    n = g.n_nodes
    k = _wreath_k(g)
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    for u, v in _lattice_edges(n, k):
        adj[u].add(v)
        adj[v].add(u)
    coins = rng.random(n * k // 2)
    for (u, v), c in zip(_lattice_edges(n, k), coins):
        if c >= p or len(adj[u]) >= n - 1:
            continue
        while True:
            w = int(rng.integers(n))
            if w != u and w not in adj[u]:
                break
        adj[u].discard(v)
        adj[v].discard(u)
        adj[u].add(w)
        adj[w].add(u)
    src = [u for u in range(n) for v in adj[u] if u < v]
    dst = [v for u in range(n) for v in adj[u] if u < v]
    return Graph(np.arange(n), src, dst)


def watts_strogatz(cfg: WattsStrogatzConfig) -> Graph:
    return rewire(generate_wreath(cfg.n, cfg.k), cfg.p, cfg.seed)


def wreath_clustering(k: int) -> float:
    """Closed-form clustering of a ring lattice: 3(k-2) / 4(k-1)."""
    return 3 * (k - 2) / (4 * (k - 1))


def wreath_path_length(n: int, k: int) -> float:
    """Exact mean distance of a ring lattice with even n/k arithmetic: n(n+k-2) / 2k(n-1).

    Holds when n is a multiple of k (the n/2k rule is its large-n limit).
    """
    return n * (n + k - 2) / (2 * k * (n - 1))


def powerlaw_count(top: int, b: int, epsilon: float) -> int:
    """ceil(top * b^-epsilon), guarded against float noise at exact integers."""
    x = top * b ** (-epsilon)
    return int(math.ceil(round(x, 9)))


def calibrate_epsilon(max_artifacts: int = 75, min_ratings: int = 15, people: int = 200) -> float:
    """Exponent at which the last person (b = people) rates exactly ``min_ratings``."""
    if min(max_artifacts, min_ratings, people) <= 0:
        raise ValueError("all arguments must be positive")
    if min_ratings > max_artifacts:
        raise ValueError(f"infeasible: min_ratings {min_ratings} > max_artifacts {max_artifacts}")
    if people == 1:
        if min_ratings != max_artifacts:
            raise ValueError("a single person rates every artifact")
        return 0.0
    eps = math.log(max_artifacts / min_ratings) / math.log(people)
    assert powerlaw_count(max_artifacts, people, eps) == min_ratings
    return eps


@dataclass(frozen=True)
class ThreeCommunityConfig:
    """Disjoint power-law communities joined by a few bridge people.

    ``epsilon=None`` calibrates the exponent from ``min_ratings``.
    """
    communities: int = 3
    people_per_community: int = 200
    artifacts_per_community: int = 75
    min_ratings: int = 15
    bridge_people: int = 3
    bridge_max_ratings: int = 15
    epsilon: float | None = None
    seed: int = 0
    scale: tuple[int, int] = (1, 5)

    def __post_init__(self):
        for name in ("communities", "people_per_community", "artifacts_per_community", "min_ratings"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.bridge_people < 0 or self.bridge_max_ratings < 0:
            raise ValueError("bridge counts must be non-negative")
        if self.min_ratings > self.artifacts_per_community:
            raise ValueError("min_ratings exceeds artifacts_per_community")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        budget = sum(self.bridge_schedule())
        if budget > self.communities * self.min_ratings:
            raise ValueError("bridge ratings exceed the artifacts every community member shares")

    @property
    def eps(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return calibrate_epsilon(self.artifacts_per_community, self.min_ratings, self.people_per_community)

    def community_schedule(self) -> list[int]:
        """Number of artifacts rated by person b = 1..people_per_community of a community."""
        return [powerlaw_count(self.artifacts_per_community, b, self.eps)
                for b in range(1, self.people_per_community + 1)]

    def bridge_schedule(self) -> list[int]:
        """Rating budget of bridge person j = 1..bridge_people under the master power-law."""
        return [powerlaw_count(self.bridge_max_ratings, j, self.eps)
                for j in range(1, self.bridge_people + 1)]

    def person_id(self, community: int, b: int) -> int:
        return community * self.people_per_community + b

    def artifact_id(self, community: int, rank: int) -> int:
        return community * self.artifacts_per_community + rank

    def bridge_id(self, j: int) -> int:
        return self.communities * self.people_per_community + j


def _master_order(cfg: ThreeCommunityConfig) -> list[int]:
    # interleave communities by artifact rank: rank 1 of each, then rank 2, ...
    return [cfg.artifact_id(c, rank)
            for rank in range(1, cfg.artifacts_per_community + 1)
            for c in range(cfg.communities)]


def generate_three_community(cfg: ThreeCommunityConfig = ThreeCommunityConfig()) -> BipartiteRatingGraph:
    """Rating graph of ``cfg.communities`` disjoint power-law blocks plus bridge people.

    Inside community c, person b rates the first ceil(A * b^-eps) artifacts of
    that community.  Bridge person j takes the next ceil(M * j^-eps)
    artifacts of one master ordering that interleaves the communities by rank,
    so each bridge spans every community and bridges share no artifacts.
    All picks fall inside the prefix every community member rated.
    Rating values are uniform on the scale (drawn from ``cfg.seed``); the
    structure alone drives the jump experiments.
    """
    rng = np.random.default_rng(cfg.seed)
    person, artifact = [], []
    schedule = cfg.community_schedule()
    for c in range(cfg.communities):
        for b, count in enumerate(schedule, start=1):
            pid = cfg.person_id(c, b)
            for rank in range(1, count + 1):
                person.append(pid)
                artifact.append(cfg.artifact_id(c, rank))
    order = _master_order(cfg)
    start = 0
    for j, budget in enumerate(cfg.bridge_schedule(), start=1):
        for a in order[start:start + budget]:
            person.append(cfg.bridge_id(j))
            artifact.append(a)
        start += budget
    lo, hi = cfg.scale
    value = rng.integers(lo, hi + 1, size=len(person))
    people = list(range(1, cfg.bridge_id(cfg.bridge_people) + 1))
    artifacts = list(range(1, cfg.communities * cfg.artifacts_per_community + 1))
    return BipartiteRatingGraph(person, artifact, value, people=people, artifacts=artifacts, scale=cfg.scale)


def community_of(cfg: ThreeCommunityConfig, person: int) -> int | None:
    """Community index of a person, or None for bridge people."""
    if person > cfg.communities * cfg.people_per_community:
        return None
    return (person - 1) // cfg.people_per_community
