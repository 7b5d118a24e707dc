import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hammock.ratings import (BipartiteRatingGraph, RatingDataError, add_person, artifact_rating_count,
                             degree_stats, export_tsv, find_artifact, load_ratings)


def write(tmp_path, text, name="r.tsv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_movielens_line(tmp_path):
    g = load_ratings(write(tmp_path, "196\t242\t3\t881250949\n"))
    assert (g.n_people, g.n_artifacts, g.n_ratings) == (1, 1, 1)
    assert g.rating(196, 242) == 3


def test_empty_file(tmp_path):
    g = load_ratings(write(tmp_path, ""))
    assert (g.n_people, g.n_artifacts, g.n_ratings) == (0, 0, 0)
    d = degree_stats(g)
    assert d.person_degrees == {} and d.artifact_histogram == {}


def test_generic_tsv_with_header(tmp_path):
    g = load_ratings(write(tmp_path, "person\tartifact\trating\n1\t2\t5\n2\t2\t1\n"),
                     format="generic-tsv", header=True)
    assert g.as_dict() == {(1, 2): 5, (2, 2): 1}


@pytest.mark.parametrize("text,line", [
    ("1\t2\t3\t0\n1\t3\n", 2),
    ("1\t2\tx\t0\n", 1),
    ("1\t2\t3\t0\n\n1\t3\t9\t0\n", 3),  # out of scale; blank line still counted
    ("1\t2\t3\t0\n1\t2\t4\t0\n", 2),  # duplicate
    ("0\t2\t3\t0\n", 1),
])
def test_bad_lines_report_line_number(tmp_path, text, line):
    with pytest.raises(RatingDataError) as e:
        load_ratings(write(tmp_path, text))
    assert e.value.line == line
    assert f"line {line}" in str(e.value)


def test_custom_scale(tmp_path):
    g = load_ratings(write(tmp_path, "1\t1\t10\n"), format="generic-tsv", scale=(1, 10))
    assert g.scale == (1, 10)
    with pytest.raises(RatingDataError):
        load_ratings(write(tmp_path, "1\t1\t10\n"), format="generic-tsv")


def test_export_round_trip(tmp_path):
    g = BipartiteRatingGraph.from_triples([(3, 1, 2), (1, 5, 4), (1, 2, 5)])
    out = tmp_path / "g.tsv"
    export_tsv(g, out, header=True)
    assert out.read_text().splitlines()[1] == "1\t2\t5"
    assert load_ratings(out, format="generic-tsv", header=True) == g


def test_degree_one_person():
    g = BipartiteRatingGraph.from_sets({1: [10, 11, 12]})
    d = degree_stats(g)
    assert d.person_degrees == {1: 3}
    assert d.artifact_degrees == {10: 1, 11: 1, 12: 1}
    assert d.histogram == {1: 3, 3: 1}


def test_rating_count_zero():
    g = BipartiteRatingGraph.from_triples([(1, 1, 3)], artifacts=[1, 2])
    assert artifact_rating_count(g, 2) == 0
    assert artifact_rating_count(g, 1) == 1


def test_add_person():
    g = BipartiteRatingGraph.from_triples([(1, 1, 3), (2, 2, 4)])
    h = add_person(g, 3, [])
    assert h.has_person(3) and degree_stats(h).person_degrees[3] == 0
    h = add_person(g, 3, [(1, 5)])
    assert h.n_ratings == 3 and g.n_ratings == 2
    with pytest.raises(KeyError):
        add_person(g, 3, [(99, 3)])
    with pytest.raises(ValueError):
        add_person(g, 1, [])


def test_find_artifact():
    titles = {1: "Star Wars (1977)", 2: "Star Trek (1979)", 3: "Scream (1996)", 4: "Scream of Stone (1991)"}
    assert find_artifact(titles, "star wars") == 1
    assert find_artifact(titles, "Scream of") == 4
    with pytest.raises(KeyError):
        find_artifact(titles, "Star")
    with pytest.raises(KeyError):
        find_artifact(titles, "Alien")


def test_arrays_are_immutable():
    g = BipartiteRatingGraph.from_triples([(1, 1, 3)])
    with pytest.raises(ValueError):
        g.value[0] = 4


triples = st.lists(st.tuples(st.integers(1, 15), st.integers(1, 15), st.integers(1, 5)), max_size=60,
                   unique_by=lambda t: (t[0], t[1]))


@settings(max_examples=100, deadline=None)
@given(triples)
def test_degree_sums_consistent(ts):
    g = BipartiteRatingGraph.from_triples(ts)
    d = degree_stats(g)
    assert sum(d.person_degrees.values()) == sum(d.artifact_degrees.values()) == g.n_ratings == len(ts)
    assert sum(d.person_histogram.values()) == g.n_people
    assert g.as_dict() == {(p, a): v for p, a, v in ts}


@settings(max_examples=50, deadline=None)
@given(triples)
def test_load_export_round_trip(tmp_path_factory, ts):
    g = BipartiteRatingGraph.from_triples(ts)
    path = tmp_path_factory.mktemp("rt") / "g.tsv"
    export_tsv(g, path)
    assert load_ratings(path, format="generic-tsv") == g
    # incidence agrees with the triples
    assert int(g.incidence.sum()) == len(ts)
    if ts:
        assert np.array_equal(np.asarray(g.rating_matrix.sum(axis=1)).ravel(),
                              [sum(v for p, _, v in ts if p == q) for q in g.people])


def test_movielens_counts(ml100k):
    assert (ml100k.n_people, ml100k.n_artifacts, ml100k.n_ratings) == (943, 1682, 100000)
    assert min(degree_stats(ml100k).person_degrees.values()) == 20


def test_movielens_table_counts(ml100k, ml_titles):
    assert artifact_rating_count(ml100k, find_artifact(ml_titles, "Star Wars (1977)")) == 583
    assert artifact_rating_count(ml100k, find_artifact(ml_titles, "Scream of Stone")) == 1
    h = add_person(ml100k, 944, [(50, 3)])
    assert (h.n_people, h.n_ratings) == (944, 100001)
