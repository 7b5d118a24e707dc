"""Benefit (w / l^2) and weak-tie risk (-dl/dp) metrics, and the experiments built on them."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .generators import generate_wreath, rewire
from .jumps import induce_social_network
from .metrics import (average_path_length, clustering_coefficient, connected_components,
                      multi_source_distances, path_length)
from .ratings import BipartiteRatingGraph


def benefit(w, l) -> float:
    if l <= 0:
        raise ValueError("path length must be >= 1")
    if w < 1:
        raise ValueError("hammock width must be >= 1")
    return w / (l * l)


@dataclass(frozen=True)
class BenefitRecord:
    w: int
    l: int
    benefit: float

    @classmethod
    def of(cls, w, l):
        return cls(w, l, benefit(w, l))


@dataclass(frozen=True)
class RiskCurve:
    """Sampled scaled length and its risk (negative derivative) over a parameter."""
    parameter: np.ndarray
    scaled_length: np.ndarray
    risk: np.ndarray

    def __len__(self):
        return len(self.parameter)

    @property
    def peak_index(self) -> int:
        return int(np.nanargmax(self.risk))

    @property
    def peak(self) -> float:
        return float(self.parameter[self.peak_index])

    def rows(self):
        return list(zip(self.parameter.tolist(), self.scaled_length.tolist(), self.risk.tolist()))


def risk_from_length_curve(parameter, scaled_length) -> RiskCurve:
    """risk = -dl/dx by finite differences on the actual (possibly uneven) grid.

    Central difference (l[i+1] - l[i-1]) / (x[i+1] - x[i-1]) inside, one-sided at
    the two ends.  Positive when length falls as the parameter grows.
    """
    x = np.asarray(parameter, dtype=np.float64)
    y = np.asarray(scaled_length, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("parameter and scaled_length must be 1-d and equally long")
    if len(x) < 2:
        raise ValueError("need at least two samples to differentiate")
    if (np.diff(x) <= 0).any():
        raise ValueError("parameter must be strictly increasing (no duplicates)")
    d = np.empty_like(y)
    d[0] = (y[1] - y[0]) / (x[1] - x[0])
    d[-1] = (y[-1] - y[-2]) / (x[-1] - x[-2])
    if len(x) > 2:
        d[1:-1] = (y[2:] - y[:-2]) / (x[2:] - x[:-2])
    return RiskCurve(x, y, -d)


def log_grid(lo: float, hi: float, count: int) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), count)


@dataclass(frozen=True)
class PSweepResult:
    p: np.ndarray
    L: np.ndarray  # mean over trials, unscaled
    C: np.ndarray
    L0: float
    C0: float
    curve: RiskCurve

    @property
    def L_scaled(self):
        return self.L / self.L0

    @property
    def C_scaled(self):
        return self.C / self.C0

    COLUMNS = ("p", "L_scaled", "C_scaled", "risk")

    def rows(self):
        return list(zip(self.p.tolist(), self.L_scaled.tolist(), self.C_scaled.tolist(),
                        self.curve.risk.tolist()))


def _ws_trial(args):
    n, k, p, seed = args
    g = rewire(generate_wreath(n, k), p, seed)
    return average_path_length(g), clustering_coefficient(g)


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Per-trial seeds; the same list is reused at every p (common random numbers)."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(trials)]


def p_risk_sweep(n: int, k: int, p_grid, trials: int = 20, seed: int = 0, workers: int = 1) -> PSweepResult:
    """Mean L(p)/L(0) and C(p)/C(0) over rewired wreaths, and risk from the scaled L."""
    p_grid = np.asarray(p_grid, dtype=np.float64)
    if len(p_grid) == 0:
        raise ValueError("empty p grid")
    if ((p_grid < 0) | (p_grid > 1)).any() or (np.diff(p_grid) <= 0).any():
        raise ValueError("p grid must be strictly increasing inside [0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    wreath = generate_wreath(n, k)
    L0, C0 = average_path_length(wreath), clustering_coefficient(wreath)
    seeds = trial_seeds(seed, trials)
    jobs = [(n, k, float(p), s) for p in p_grid for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            res = list(ex.map(_ws_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        res = [_ws_trial(j) for j in jobs]
    arr = np.array(res).reshape(len(p_grid), trials, 2)
    L, C = arr[..., 0].mean(axis=1), arr[..., 1].mean(axis=1)
    curve = risk_from_length_curve(p_grid, L / L0)
    return PSweepResult(p_grid, L, C, L0, C0, curve)


@dataclass(frozen=True)
class WidthRiskResult:
    w: np.ndarray  # ascending
    length: np.ndarray
    scaled_length: np.ndarray
    risk: np.ndarray  # risk[i] = scaled(w[i]+1) - scaled(w[i]); NaN at the top width
    component_count: np.ndarray
    non_singleton_count: np.ndarray
    baseline_w: int
    how: str

    COLUMNS = ("w", "scaled_length", "risk")

    @property
    def monotone(self) -> bool:
        """Scaled length never increases as the width decreases."""
        return bool((np.diff(self.scaled_length) >= -1e-12).all())

    @property
    def peak_w(self) -> int:
        return int(self.w[np.nanargmax(self.risk)])

    def first_connected_w(self, non_singleton=True) -> int | None:
        """Largest width at which the (non-singleton) component count is 1."""
        counts = self.non_singleton_count if non_singleton else self.component_count
        hits = self.w[counts == 1]
        return int(hits.max()) if len(hits) else None

    def rows(self):
        """Descending w, as the sweep is run."""
        return [(int(w), float(s), float(r))
                for w, s, r in zip(self.w[::-1], self.scaled_length[::-1], self.risk[::-1])]


def width_risk_sweep(g: BipartiteRatingGraph, w_range, baseline_w: int = 8, how: str = "harmonic") -> WidthRiskResult:
    """Risk of lowering the hammock width one step at a time.

    ``how`` picks the length: ``harmonic`` (default; unreachable pairs count
    as infinitely far, so merging components shortens it), ``connected``
    (mean over connected pairs) or ``largest`` (largest component only).
    """
    ws = sorted({int(w) for w in w_range})
    if baseline_w not in ws:
        raise ValueError(f"baseline width {baseline_w} not in the sweep")
    if ws != list(range(ws[0], ws[-1] + 1)):
        raise ValueError("widths must form a contiguous integer range")
    lengths, counts, ns = [], [], []
    for w in ws:
        s = induce_social_network(g, w)
        if w == baseline_w and s.n_edges == 0:
            raise ValueError(f"social network at baseline width {baseline_w} has no edges")
        lengths.append(path_length(s, how) if s.n_edges else np.inf)
        comp = connected_components(s)
        counts.append(comp.component_count)
        ns.append(comp.non_singleton_count)
    length = np.array(lengths)
    scaled = length / length[ws.index(baseline_w)]
    risk = np.full(len(ws), np.nan)
    risk[:-1] = scaled[1:] - scaled[:-1]
    return WidthRiskResult(np.array(ws), length, scaled, risk, np.array(counts), np.array(ns), baseline_w, how)


# -- incremental benefit experiment --------------------------------------------

@dataclass
class FeasibilityMatrix:
    """Achievable (ratings_added, benefit_bin) cells per target.

    ``cells[r, t, n, b]`` is True when repetition r, after ``n`` added ratings,
    can reach target t with a benefit that rounds to bin ``b + 1``.
    """
    targets: list[int]
    bins: np.ndarray  # bin labels (benefit values)
    cells: np.ndarray = field(repr=False)

    @property
    def repetitions(self):
        return self.cells.shape[0]

    @property
    def max_ratings(self):
        return self.cells.shape[2] - 1

    def achievable_counts(self) -> np.ndarray:
        """[target, ratings_added, bin] -> number of repetitions achieving the cell."""
        return self.cells.sum(axis=0)

    def cell_set(self, rep: int, target) -> set[tuple[int, float]]:
        t = self.targets.index(target)
        n, b = np.nonzero(self.cells[rep, t])
        return set(zip(n.tolist(), self.bins[b].tolist()))

    def nested(self, rep: int, order=None) -> bool:
        """Each target's cells contain the next one's (``order`` defaults to ``targets``)."""
        order = list(self.targets if order is None else order)
        sets = [self.cell_set(rep, t) for t in order]
        return all(a >= b for a, b in zip(sets, sets[1:]))

    def max_benefit(self, rep: int, target) -> np.ndarray:
        """Largest achievable bin per ratings_added (0 where nothing is achievable)."""
        t = self.targets.index(target)
        c = self.cells[rep, t]
        out = np.zeros(c.shape[0])
        has = c.any(axis=1)
        out[has] = np.array([self.bins[np.flatnonzero(row)].max() for row in c[has]])
        return out

    COLUMNS = ("target", "ratings_added", "benefit_bin", "achievable_count")

    def rows(self):
        counts = self.achievable_counts()
        out = []
        for t, target in enumerate(self.targets):
            for n in range(counts.shape[1]):
                for b in np.flatnonzero(counts[t, n]).tolist():
                    out.append((target, n, float(self.bins[b]), int(counts[t, n, b])))
        return out


def _distance_to_raters(g: BipartiteRatingGraph, w: int, targets) -> np.ndarray:
    """[target, person] hammock distance at width w from each person to the nearest rater."""
    s = induce_social_network(g, w)
    out = np.full((len(targets), g.n_people), np.inf)
    for t, a in enumerate(targets):
        raters = np.searchsorted(g.people, g.raters_of(a))
        if len(raters) == 0:
            continue
        out[t] = multi_source_distances(s.adjacency, raters)
    return out


def sample_newcomer_ratings(g: BipartiteRatingGraph, targets, max_ratings: int, seed) -> np.ndarray:
    """Artifact IDs a newcomer rates, in order: popularity-weighted, no repeats, never a target."""
    rng = np.random.default_rng(seed)
    weights = np.bincount(g.artifact_pos, minlength=g.n_artifacts).astype(np.float64)
    weights[[g.artifact_index(a) for a in targets]] = 0.0
    n_avail = int((weights > 0).sum())
    if max_ratings > n_avail:
        raise ValueError(f"only {n_avail} artifacts can be sampled, asked for {max_ratings}")
    picks = rng.choice(g.n_artifacts, size=max_ratings, replace=False, p=weights / weights.sum())
    return g.artifacts[picks]


def _benefit_repetition(args):
    g, targets, max_ratings, ws, bins, bin_width, dist, seed = args
    picks = np.searchsorted(g.artifacts, sample_newcomer_ratings(g, targets, max_ratings, seed))
    inc = g.incidence.T.tocsr()
    common = np.zeros(g.n_people, dtype=np.int64)
    wcol = np.asarray(ws)[:, None]
    cells = np.zeros((len(targets), max_ratings + 1, len(bins)), dtype=bool)
    for n in range(max_ratings + 1):
        if n > 0:
            j = picks[n - 1]
            common[inc.indices[inc.indptr[j]:inc.indptr[j + 1]]] += 1
        neighbour = common[None, :] >= wcol  # [w, person]
        if not neighbour.any():
            continue
        for t in range(len(targets)):
            d = np.where(neighbour, dist[:, t, :], np.inf).min(axis=1)  # [w]
            ok = np.isfinite(d)
            if not ok.any():
                continue
            l = d[ok] + 1
            b = np.asarray(ws)[ok] / (l * l)
            idx = np.clip(np.floor(b / bin_width + 0.5).astype(int), 1, len(bins)) - 1
            cells[t, n, idx] = True
    return cells


def incremental_benefit_experiment(g: BipartiteRatingGraph, targets, max_ratings: int = 300,
                                   repetitions: int = 20, w_range=range(1, 21), seed: int = 0,
                                   bin_width: float = 1.0, new_person=None,
                                   workers: int = 1) -> FeasibilityMatrix:
    """Benefit achievable by a newcomer as they add ratings one at a time.

    Every repetition adds a fresh person (ID ``max(people) + 1`` unless given)
    who rates artifacts drawn without replacement in proportion to their
    rating counts (targets are never drawn; rating values play no part in
    path lengths so the newcomer is never materialised).  After each rating, for every width w the path length l to
    each target is 1 + the distance (at width w) from the newcomer's
    w-neighbours to the target's raters; benefit w/l^2 is rounded to a bin in
    [1, max w].  Repetition i uses seed ``seed + i``.
    """
    targets = [int(a) for a in targets]
    for a in targets:
        g.artifact_index(a)
    ws = sorted({int(w) for w in w_range})
    if not ws or ws[0] < 1:
        raise ValueError("widths must be >= 1")
    new_person = int(g.people.max()) + 1 if new_person is None else int(new_person)
    if g.has_person(new_person):
        raise ValueError(f"person {new_person} already exists")
    n_bins = int(math.floor(ws[-1] / bin_width + 0.5))
    bins = np.arange(1, n_bins + 1) * bin_width

    dist = np.stack([_distance_to_raters(g, w, targets) for w in ws])  # [w, target, person]
    jobs = [(g, targets, max_ratings, ws, bins, bin_width, dist, seed + i) for i in range(repetitions)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            cells = list(ex.map(_benefit_repetition, jobs))
    else:
        cells = [_benefit_repetition(j) for j in jobs]
    return FeasibilityMatrix(targets, bins, np.stack(cells))
