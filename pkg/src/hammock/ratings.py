"""Bipartite people/artifact rating graphs: ingestion, export and degree statistics."""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

DEFAULT_SCALE = (1, 5)
FORMATS = ("movielens-tab", "generic-tsv")


class RatingDataError(ValueError):
    """Malformed or inconsistent rating input."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _frozen(a, dtype=np.int64):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class BipartiteRatingGraph:
    """Immutable set of (person, artifact, rating) edges.

    People and artifacts are identified by the integer IDs of the source data
    (no re-indexing).  Internally the ratings are kept as three parallel arrays
    sorted by (person, artifact); ``people`` and ``artifacts`` are sorted ID
    arrays and may contain nodes without ratings.
    """

    def __init__(self, person, artifact, value, *, people=None, artifacts=None, scale=DEFAULT_SCALE):
        person = np.asarray(person, dtype=np.int64).reshape(-1)
        artifact = np.asarray(artifact, dtype=np.int64).reshape(-1)
        value = np.asarray(value, dtype=np.int64).reshape(-1)
        if not (len(person) == len(artifact) == len(value)):
            raise ValueError("person, artifact and value must have equal length")
        lo, hi = scale
        if lo > hi:
            raise ValueError(f"invalid rating scale {scale}")
        if len(value) and (value.min() < lo or value.max() > hi):
            bad = value[(value < lo) | (value > hi)][0]
            raise RatingDataError(f"rating {bad} outside scale {scale}")

        order = np.lexsort((artifact, person))
        person, artifact, value = person[order], artifact[order], value[order]
        if len(person) > 1:
            dup = (np.diff(person) == 0) & (np.diff(artifact) == 0)
            if dup.any():
                j = int(np.argmax(dup))
                raise RatingDataError(f"duplicate rating for person {person[j]}, artifact {artifact[j]}")

        ppl = np.unique(person) if people is None else np.unique(np.asarray(list(people), dtype=np.int64))
        arts = np.unique(artifact) if artifacts is None else np.unique(np.asarray(list(artifacts), dtype=np.int64))
        if len(person) and not np.isin(person, ppl).all():
            raise RatingDataError("rating references a person not in the graph")
        if len(artifact) and not np.isin(artifact, arts).all():
            raise RatingDataError("rating references an artifact not in the graph")

        self.person = _frozen(person)
        self.artifact = _frozen(artifact)
        self.value = _frozen(value)
        self.people = _frozen(ppl)
        self.artifacts = _frozen(arts)
        self.scale = (int(lo), int(hi))

    # -- sizes -------------------------------------------------------------
    @property
    def n_people(self):
        return len(self.people)

    @property
    def n_artifacts(self):
        return len(self.artifacts)

    @property
    def n_ratings(self):
        return len(self.value)

    def __repr__(self):
        return (f"BipartiteRatingGraph(people={self.n_people}, artifacts={self.n_artifacts}, "
                f"ratings={self.n_ratings}, scale={self.scale})")

    # -- positional indexing ----------------------------------------------
    @cached_property
    def person_pos(self) -> np.ndarray:
        """Row index (position in ``people``) of every rating."""
        return _frozen(np.searchsorted(self.people, self.person))

    @cached_property
    def artifact_pos(self) -> np.ndarray:
        return _frozen(np.searchsorted(self.artifacts, self.artifact))

    def person_index(self, p) -> int:
        i = int(np.searchsorted(self.people, p))
        if i == len(self.people) or self.people[i] != p:
            raise KeyError(f"unknown person {p}")
        return i

    def artifact_index(self, a) -> int:
        i = int(np.searchsorted(self.artifacts, a))
        if i == len(self.artifacts) or self.artifacts[i] != a:
            raise KeyError(f"unknown artifact {a}")
        return i

    def has_person(self, p) -> bool:
        i = int(np.searchsorted(self.people, p))
        return i < len(self.people) and self.people[i] == p

    def has_artifact(self, a) -> bool:
        i = int(np.searchsorted(self.artifacts, a))
        return i < len(self.artifacts) and self.artifacts[i] == a

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """people x artifacts 0/1 matrix (rows/cols follow ``people``/``artifacts``)."""
        m = sp.csr_matrix(
            (np.ones(self.n_ratings, dtype=np.int64), (self.person_pos, self.artifact_pos)),
            shape=(self.n_people, self.n_artifacts),
        )
        m.sort_indices()
        return m

    @cached_property
    def rating_matrix(self) -> sp.csr_matrix:
        """people x artifacts matrix of rating values (0 = unrated)."""
        m = sp.csr_matrix(
            (self.value, (self.person_pos, self.artifact_pos)),
            shape=(self.n_people, self.n_artifacts),
        )
        m.sort_indices()
        return m

    @cached_property
    def _by_artifact(self) -> sp.csr_matrix:
        m = self.rating_matrix.T.tocsr()
        m.sort_indices()
        return m

    # -- adjacency queries -------------------------------------------------
    def artifacts_of(self, p) -> np.ndarray:
        """Artifact IDs rated by person ``p``, ascending."""
        i = self.person_index(p)
        m = self.rating_matrix
        return self.artifacts[m.indices[m.indptr[i]:m.indptr[i + 1]]]

    def raters_of(self, a) -> np.ndarray:
        """Person IDs who rated artifact ``a``, ascending."""
        j = self.artifact_index(a)
        m = self._by_artifact
        return self.people[m.indices[m.indptr[j]:m.indptr[j + 1]]]

    def rating(self, p, a):
        """Rating value of ``p`` for ``a`` or None."""
        m = self.rating_matrix
        i, j = self.person_index(p), self.artifact_index(a)
        v = m[i, j]
        return int(v) if v else None

    def ratings_of(self, p) -> dict[int, int]:
        i = self.person_index(p)
        m = self.rating_matrix
        sl = slice(m.indptr[i], m.indptr[i + 1])
        return dict(zip(self.artifacts[m.indices[sl]].tolist(), m.data[sl].tolist()))

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(int(p), int(a)): int(v) for p, a, v in zip(self.person, self.artifact, self.value)}

    def __eq__(self, other):
        if not isinstance(other, BipartiteRatingGraph):
            return NotImplemented
        return (self.scale == other.scale
                and np.array_equal(self.people, other.people)
                and np.array_equal(self.artifacts, other.artifacts)
                and np.array_equal(self.person, other.person)
                and np.array_equal(self.artifact, other.artifact)
                and np.array_equal(self.value, other.value))

    __hash__ = None

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, int, int]], **kw) -> "BipartiteRatingGraph":
        rows = list(triples)
        if not rows:
            return cls([], [], [], **kw)
        p, a, v = zip(*rows)
        return cls(p, a, v, **kw)

    @classmethod
    def from_sets(cls, rated: Mapping[int, Iterable[int]], value=3, **kw) -> "BipartiteRatingGraph":
        """Build from {person: artifacts}; every rating gets ``value``."""
        triples = [(p, a, value) for p, arts in rated.items() for a in arts]
        kw.setdefault("people", list(rated))
        return cls.from_triples(triples, **kw)


def _parse_lines(lines, fmt, header):
    person, artifact, value, where = [], [], [], []
    want = 4 if fmt == "movielens-tab" else 3
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if header and lineno == 1:
            continue
        fields = line.split("\t")
        if len(fields) != want:
            raise RatingDataError(f"expected {want} tab-separated fields, got {len(fields)}", lineno)
        try:
            p, a, v = int(fields[0]), int(fields[1]), int(fields[2])
            if fmt == "movielens-tab":
                int(fields[3])
        except ValueError:
            raise RatingDataError(f"non-integer field in {line!r}", lineno) from None
        if p < 1 or a < 1:
            raise RatingDataError("IDs must be >= 1", lineno)
        person.append(p)
        artifact.append(a)
        value.append(v)
        where.append(lineno)
    return person, artifact, value, where


def load_ratings(source, format="movielens-tab", scale=DEFAULT_SCALE, header=False) -> BipartiteRatingGraph:
    """Read a rating file.

    ``movielens-tab`` lines are ``person<TAB>artifact<TAB>rating<TAB>timestamp``
    (timestamp checked for shape, then dropped); ``generic-tsv`` lines are
    ``person<TAB>artifact<TAB>rating`` with an optional header row.

    Raises RatingDataError with the offending line number on malformed input,
    out-of-scale ratings or duplicate (person, artifact) pairs.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    with open(source, encoding="utf-8") as fh:
        person, artifact, value, where = _parse_lines(fh, format, header)

    lo, hi = scale
    seen = {}
    for lineno, p, a, v in zip(where, person, artifact, value):
        if not lo <= v <= hi:
            raise RatingDataError(f"rating {v} outside scale {tuple(scale)}", lineno)
        if (p, a) in seen:
            raise RatingDataError(f"duplicate rating for person {p}, artifact {a} "
                                  f"(first on line {seen[p, a]})", lineno)
        seen[p, a] = lineno
    return BipartiteRatingGraph(person, artifact, value, scale=scale)


def export_tsv(g: BipartiteRatingGraph, path, header=False):
    """Write generic TSV sorted by (person, artifact); atomic via rename."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write("person\tartifact\trating\n")
        for p, a, v in zip(g.person.tolist(), g.artifact.tolist(), g.value.tolist()):
            fh.write(f"{p}\t{a}\t{v}\n")
    os.replace(tmp, path)


def load_titles(path) -> dict[int, str]:
    """MovieLens ``u.item``: ``id|title|...`` (latin-1)."""
    titles = {}
    with open(path, encoding="latin-1") as fh:
        for line in fh:
            if not line.strip():
                continue
            fields = line.rstrip("\r\n").split("|")
            titles[int(fields[0])] = fields[1]
    return titles


def find_artifact(titles: Mapping[int, str], query: str) -> int:
    """Resolve a title (case-insensitive; exact, then prefix) to an artifact ID."""
    q = query.strip().lower()
    exact = [i for i, t in titles.items() if t.lower() == q]
    if len(exact) == 1:
        return exact[0]
    prefix = sorted(i for i, t in titles.items() if t.lower().startswith(q))
    if len(prefix) == 1:
        return prefix[0]
    if not prefix:
        raise KeyError(f"no artifact titled {query!r}")
    raise KeyError(f"ambiguous title {query!r}: {[titles[i] for i in prefix[:5]]}")


@dataclass(frozen=True)
class DegreeSummary:
    person_degrees: dict[int, int]
    artifact_degrees: dict[int, int]
    # degree -> number of nodes with that degree, per side
    person_histogram: dict[int, int]
    artifact_histogram: dict[int, int]

    @property
    def histogram(self) -> dict[int, int]:
        """Combined degree histogram over both sides."""
        h = Counter(self.person_histogram)
        h.update(self.artifact_histogram)
        return dict(sorted(h.items()))


def degree_stats(g: BipartiteRatingGraph) -> DegreeSummary:
    pdeg = np.bincount(g.person_pos, minlength=g.n_people) if g.n_people else np.zeros(0, int)
    adeg = np.bincount(g.artifact_pos, minlength=g.n_artifacts) if g.n_artifacts else np.zeros(0, int)
    person_degrees = dict(zip(g.people.tolist(), pdeg.tolist()))
    artifact_degrees = dict(zip(g.artifacts.tolist(), adeg.tolist()))
    return DegreeSummary(
        person_degrees=person_degrees,
        artifact_degrees=artifact_degrees,
        person_histogram=dict(sorted(Counter(pdeg.tolist()).items())),
        artifact_histogram=dict(sorted(Counter(adeg.tolist()).items())),
    )


def artifact_rating_count(g: BipartiteRatingGraph, a) -> int:
    return len(g.raters_of(a))


def add_person(g: BipartiteRatingGraph, p, ratings: Iterable[tuple[int, int]]) -> BipartiteRatingGraph:
    """Return a new graph with person ``p`` and their ratings; ``g`` is untouched."""
    if g.has_person(p):
        raise ValueError(f"person {p} already present")
    ratings = list(ratings)
    for a, _ in ratings:
        if not g.has_artifact(a):
            raise KeyError(f"unknown artifact {a}")
    new_a = np.array([a for a, _ in ratings], dtype=np.int64)
    new_v = np.array([v for _, v in ratings], dtype=np.int64)
    return BipartiteRatingGraph(
        np.concatenate([g.person, np.full(len(ratings), p, dtype=np.int64)]),
        np.concatenate([g.artifact, new_a]),
        np.concatenate([g.value, new_v]),
        people=np.append(g.people, p),
        artifacts=g.artifacts,
        scale=g.scale,
    )
