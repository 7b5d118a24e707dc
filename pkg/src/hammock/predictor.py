"""Agreement-scalar nearest-neighbour prediction and leave-one-out evaluation.

Scoring per co-rated artifact, by absolute rating difference: 0 -> +2,
1 -> +1, 2 -> 0, 3 or more -> -1.  The agreement scalar of two people is
the sum over their co-rated artifacts.

A prediction from neighbour v for person u is v's rating shifted by the
translation mean(r_u - r_v) over the artifacts both rated (0 when they share
none).  Along a longer hammock path u = p0 -> p1 -> ... -> pk the shift is
the sum of the per-edge translations.

Leave-one-out masking is exact: every precomputed pairwise quantity is
corrected for the masked rating rather than recomputed, and the result is
identical to predicting on a graph with that rating removed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.stats import spearmanr

from .ratings import BipartiteRatingGraph

MAX_HOPS = 3


def score_difference(delta):
    """Agreement score of one co-rated artifact from |r_u - r_v|."""
    delta = np.abs(np.asarray(delta))
    return np.select([delta == 0, delta == 1, delta == 2], [2, 1, 0], default=-1)


@dataclass(frozen=True)
class AgreementScalar:
    value: int
    common_count: int


def agreement_scalar(g: BipartiteRatingGraph, u, v) -> AgreementScalar:
    if u == v:
        raise ValueError("agreement of a person with themselves is undefined")
    ru, rv = g.ratings_of(u), g.ratings_of(v)
    common = sorted(set(ru) & set(rv))
    value = int(sum(int(score_difference(ru[a] - rv[a])) for a in common))
    return AgreementScalar(value, len(common))


@dataclass(frozen=True)
class PredictionOutcome:
    person: int
    artifact: int
    actual: int | None
    predicted: float | None
    width: int | None  # common ratings with the neighbour on the first hop
    bucket: int | None  # person hops + 1 (the final hop to the artifact)
    skipped_reason: str = ""

    COLUMNS = ("person", "artifact", "actual", "predicted", "abs_error", "width", "bucket", "skipped_reason")

    @property
    def skipped(self) -> bool:
        return bool(self.skipped_reason)

    @property
    def abs_error(self) -> float | None:
        if self.predicted is None or self.actual is None:
            return None
        return abs(self.predicted - self.actual)

    def as_row(self):
        return [self.person, self.artifact, self.actual, self.predicted, self.abs_error,
                self.width, self.bucket, self.skipped_reason]


class NeighborPredictor:
    """Precomputed pairwise tables for fast masked predictions on one graph.

    Memory is O(people^2 + people * artifacts); fine for MovieLens-sized data.
    """

    def __init__(self, g: BipartiteRatingGraph):
        self.g = g
        self.lo, self.hi = g.scale
        R = g.rating_matrix
        self.R = R.toarray()
        B = g.incidence.astype(np.float64)
        self.common = np.rint((B @ B.T).toarray()).astype(np.int64)
        np.fill_diagonal(self.common, 0)
        # agree[u, v] = sum over co-rated artifacts of score(|r_u - r_v|)
        levels = range(self.lo, self.hi + 1)
        X = {a: sp.csr_matrix((self.R == a).astype(np.float64)) for a in levels}
        agree = np.zeros_like(self.common, dtype=np.float64)
        for a in levels:
            for b in levels:
                s = int(score_difference(a - b))
                if s:
                    agree += s * (X[a] @ X[b].T).toarray()
        self.agree = np.rint(agree).astype(np.int64)
        np.fill_diagonal(self.agree, 0)
        # tsum[u, v] = sum of u's ratings over artifacts u and v both rated
        self.tsum = np.rint((R.astype(np.float64) @ B.T).toarray()).astype(np.int64)
        self._adj_cache: dict[int, list[np.ndarray]] = {}

    # -- helpers -------------------------------------------------------------
    def _raters(self, j):
        return np.flatnonzero(self.R[:, j])

    def _clip(self, x):
        return float(min(max(x, self.lo), self.hi))

    def agreement(self, u, v, masked_artifact=None) -> AgreementScalar:
        """Agreement scalar from the tables, optionally with u's rating of an artifact masked."""
        i, k = self.g.person_index(u), self.g.person_index(v)
        val, com = int(self.agree[i, k]), int(self.common[i, k])
        if masked_artifact is not None:
            j = self.g.artifact_index(masked_artifact)
            if self.R[i, j] and self.R[k, j]:
                val -= int(score_difference(self.R[i, j] - self.R[k, j]))
                com -= 1
        return AgreementScalar(val, com)

    # -- one hop -------------------------------------------------------------
    def predict(self, person, artifact) -> PredictionOutcome:
        """Best-agreement neighbour prediction; ``person``'s own rating (if any) is masked.

        Candidates are the other raters of ``artifact``.  Ties on agreement
        go to more common ratings, then the smaller person ID.
        """
        i, j = self.g.person_index(person), self.g.artifact_index(artifact)
        x = int(self.R[i, j])
        cand = self._raters(j)
        cand = cand[cand != i]
        actual = x or None
        if len(cand) == 0:
            return PredictionOutcome(person, artifact, actual, None, None, None, "no_other_rater")
        val = self.agree[i, cand].copy()
        com = self.common[i, cand].copy()
        if x:
            val -= score_difference(x - self.R[cand, j])
            com -= 1
        best = np.lexsort((cand, -com, -val))[0]
        k = cand[best]
        pred = self._clip(self.R[k, j] + self._translation(i, k, j, x))
        return PredictionOutcome(person, artifact, actual, pred, int(com[best]), 2)

    # -- hammock paths -------------------------------------------------------
    def _adjacency(self, width):
        if width not in self._adj_cache:
            self._adj_cache[width] = [np.flatnonzero(row >= width) for row in self.common]
        return self._adj_cache[width]

    def _first_hop(self, i, j, x, width):
        com = self.common[i]
        if x:
            com = com - (self.R[:, j] > 0)
        return np.flatnonzero(com >= width)

    def _layers(self, i, first, width, max_hops):
        adj = self._adjacency(width)
        parent = {i: -1}
        layers = []
        frontier = [int(v) for v in first]
        for v in frontier:
            parent[v] = i
        while frontier and len(layers) < max_hops:
            layers.append(frontier)
            nxt = []
            for u in frontier:
                for v in adj[u].tolist():
                    if v not in parent:
                        parent[v] = u
                        nxt.append(v)
            frontier = sorted(nxt)
        return layers, parent

    def _translation(self, u, v, j=None, x=0):
        """mean(r_u - r_v) over co-rated artifacts; u's rating of artifact j masked when x."""
        n = self.common[u, v]
        su, sv = self.tsum[u, v], self.tsum[v, u]
        if x and self.R[v, j]:
            n -= 1
            su -= x
            sv -= self.R[v, j]
        return (su - sv) / n if n else 0.0

    def path_predictions(self, person, artifact, width, max_hops=MAX_HOPS, layered=True):
        """Predictions over hammock paths of width >= ``width``.

        Breadth-first layers from ``person`` (ascending IDs, first discovery
        sets the parent).  In each layer holding a rater of ``artifact``
        the smallest-ID rater is used along its parent chain; with
        ``layered=False`` only the nearest layer contributes.
        """
        i, j = self.g.person_index(person), self.g.artifact_index(artifact)
        x = int(self.R[i, j])
        return self._path_outcomes(i, j, x, width, max_hops, layered, cache=None)[0]

    def _path_outcomes(self, i, j, x, width, max_hops, layered, cache):
        person, artifact = int(self.g.people[i]), int(self.g.artifacts[j])
        actual = x or None
        if not (self._raters(j) != i).any():
            return [PredictionOutcome(person, artifact, actual, None, None, None, "no_other_rater")], cache
        first = self._first_hop(i, j, x, width)
        first = first[first != i]
        if len(first) == 0:
            return [PredictionOutcome(person, artifact, actual, None, None, None, "no_neighbor_at_width")], cache
        if cache is not None and cache[0] == i and np.array_equal(cache[1], first):
            layers, parent = cache[2], cache[3]
        else:
            layers, parent = self._layers(i, first, width, max_hops)
        out = []
        rated = self.R[:, j] > 0
        for h, layer in enumerate(layers, start=1):
            raters = [v for v in layer if rated[v]]
            if not raters:
                continue
            f = min(raters)
            chain = [f]
            while parent[chain[-1]] != i:
                chain.append(parent[chain[-1]])
            chain.append(i)
            chain.reverse()  # i -> ... -> f
            shift = self._translation(chain[0], chain[1], j, x)
            for a, b in zip(chain[1:-1], chain[2:]):
                shift += self._translation(a, b)
            pred = self._clip(self.R[f, j] + shift)
            hop_width = int(self.common[i, chain[1]] - (1 if x and rated[chain[1]] else 0))
            out.append(PredictionOutcome(person, artifact, actual, pred, hop_width, h + 1))
            if not layered:
                break
        if not out:
            out.append(PredictionOutcome(person, artifact, actual, None, None, None,
                                         f"no_rater_within_{max_hops}_hops"))
        return out, (i, first, layers, parent)

    def masked_path_predictions(self, pairs, width, max_hops=MAX_HOPS, layered=True):
        """Path predictions for many (person_pos, artifact_pos) masks, reusing BFS per person."""
        out = []
        cache = None
        for i, j in pairs:
            res, cache = self._path_outcomes(i, j, int(self.R[i, j]), width, max_hops, layered, cache)
            out.extend(res)
        return out


def predict_nn(g: BipartiteRatingGraph, person, artifact) -> PredictionOutcome:
    return NeighborPredictor(g).predict(person, artifact)


def leave_one_out(g: BipartiteRatingGraph, mode="by_width", min_width=None, sample=None, seed=0,
                  layered=True, predictor: NeighborPredictor | None = None) -> list[PredictionOutcome]:
    """Mask each rating (or a seeded uniform sample of ``sample`` ratings) and predict it.

    ``by_width`` uses the best-agreement neighbour.  ``by_path_bucket`` walks
    hammock paths of width >= ``min_width`` up to three person hops.
    Outcomes come back in (person, artifact) order.
    """
    if mode not in ("by_width", "by_path_bucket"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "by_path_bucket" and (min_width is None or min_width < 1):
        raise ValueError("by_path_bucket needs min_width >= 1")
    pred = predictor or NeighborPredictor(g)
    idx = np.arange(g.n_ratings)
    if sample is not None and sample < g.n_ratings:
        idx = np.sort(np.random.default_rng(seed).choice(g.n_ratings, size=sample, replace=False))
    pairs = list(zip(g.person_pos[idx].tolist(), g.artifact_pos[idx].tolist()))
    if mode == "by_width":
        return [pred.predict(int(g.people[i]), int(g.artifacts[j])) for i, j in pairs]
    return pred.masked_path_predictions(pairs, min_width, layered=layered)


@dataclass(frozen=True)
class WidthTrend:
    edges: np.ndarray
    means: np.ndarray
    counts: np.ndarray
    rho: float


def width_decile_trend(outcomes, bins=10, include_zero_width=False) -> WidthTrend:
    """Mean |error| per width quantile bin and its Spearman correlation with bin order."""
    done = [o for o in outcomes if not o.skipped and (include_zero_width or o.width)]
    if not done:
        raise ValueError("no predictions to summarise")
    w = np.array([o.width for o in done], dtype=np.float64)
    e = np.array([o.abs_error for o in done])
    edges = np.quantile(w, np.linspace(0, 1, bins + 1))
    b = np.clip(np.searchsorted(edges, w, side="right") - 1, 0, bins - 1)
    counts = np.bincount(b, minlength=bins)
    sums = np.bincount(b, weights=e, minlength=bins)
    with np.errstate(invalid="ignore"):
        means = sums / counts
    ok = counts > 0
    rho = spearmanr(np.flatnonzero(ok), means[ok]).statistic if ok.sum() > 1 else float("nan")
    return WidthTrend(edges, means, counts, float(rho))


def bucket_means(outcomes) -> dict[int, tuple[float, int]]:
    """{bucket: (mean |error|, count)} over predicted outcomes."""
    acc: dict[int, list[float]] = {}
    for o in outcomes:
        if not o.skipped:
            acc.setdefault(o.bucket, []).append(o.abs_error)
    return {b: (float(np.mean(v)), len(v)) for b, v in sorted(acc.items())}
