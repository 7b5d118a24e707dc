import hashlib
import json
import random

import pytest

from hammock import __version__
from hammock.cli import (EXIT_BAD_DATA, EXIT_BAD_PARAMETER, EXIT_MISSING_INPUT, EXIT_OK, EXIT_USAGE, int_range,
                         p_grid, run)


@pytest.fixture(scope="module")
def ratings_file(tmp_path_factory):
    rng = random.Random(11)
    lines = []
    for p in range(1, 31):
        for a in sorted(rng.sample(range(1, 41), rng.randint(4, 20))):
            lines.append(f"{p}\t{a}\t{rng.randint(1, 5)}\t{880000000 + p}\n")
    path = tmp_path_factory.mktemp("data") / "u.data"
    path.write_text("".join(lines))
    items = path.parent / "u.item"
    items.write_text("".join(f"{a}|Movie {a} (1990)|x\n" for a in range(1, 41)), encoding="latin-1")
    return path


def digest(d):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(d.iterdir())}


def commands(data):
    items = str(data.parent / "u.item")
    return {
        "ingest": ["ingest", "--in", str(data)],
        "stats": ["stats", "--in", str(data)],
        "induce": ["induce", "--in", str(data), "--w", "3", "--ties"],
        "sweep-width": ["sweep-width", "--in", str(data), "--w", "1..8..2"],
        "sweep-p": ["sweep-p", "--n", "40", "--k", "4", "--p", "log:1e-3..1..4", "--trials", "3"],
        "risk-width": ["risk-width", "--three-community", "--w", "9..1"],
        "benefit-experiment": ["benefit-experiment", "--in", str(data), "--items", items,
                               "--targets", "Movie 3 (1990);7", "--max-ratings", "10", "--repetitions", "3",
                               "--w", "1..4"],
        "predict-loo-width": ["predict-loo", "--in", str(data), "--sample", "50"],
        "predict-loo-path": ["predict-loo", "--in", str(data), "--mode", "by_path_bucket", "--min-width", "3",
                             "--full"],
        "generate-ws": ["generate", "ws", "--n", "1000", "--k", "10", "--p", "0.01"],
        "generate-three": ["generate", "three-community"],
    }


COMMANDS = ["ingest", "stats", "induce", "sweep-width", "sweep-p", "risk-width", "benefit-experiment",
            "predict-loo-width", "predict-loo-path", "generate-ws", "generate-three"]


@pytest.mark.parametrize("name", COMMANDS)
def test_double_run_byte_identical(tmp_path, ratings_file, name):
    cmds = commands(ratings_file)
    assert sorted(cmds) == sorted(COMMANDS)
    argv = cmds[name]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(argv + ["--seed", "7", "--workers", "1", "--out-dir", str(a)]) == EXIT_OK
    assert run(argv + ["--seed", "7", "--workers", "2", "--out-dir", str(b)]) == EXIT_OK
    da, db = digest(a), digest(b)
    assert da == db and "run.json" in da and len(da) >= 2
    man = json.loads((a / "run.json").read_text())
    assert man["seed"] == 7 and man["version"] == __version__ and "out_dir" not in man["config"]


def test_output_headers(tmp_path, ratings_file):
    cmds = commands(ratings_file)
    expect = {
        "sweep-width": ("sweep_width.csv", "w,component_count,people_fraction,artifact_fraction,L,C"),
        "sweep-p": ("sweep_p.csv", "p,L_scaled,C_scaled,risk"),
        "benefit-experiment": ("benefit.csv", "target,ratings_added,benefit_bin,achievable_count_of_3"),
        "predict-loo-width": ("predictions.csv",
                              "person,artifact,actual,predicted,abs_error,width,bucket,skipped_reason"),
        "induce": ("social.tsv", "person_a\tperson_b\tcommon_count"),
    }
    for name, (fname, header) in expect.items():
        out = tmp_path / name
        assert run(cmds[name] + ["--out-dir", str(out)]) == EXIT_OK
        assert (out / fname).read_text().splitlines()[0] == header
    out = tmp_path / "risk"
    assert run(cmds["risk-width"] + ["--out-dir", str(out)]) == EXIT_OK
    assert (out / "risk_width.csv").read_text().startswith("w,scaled_length,risk")


def test_seed_changes_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["generate", "ws", "--n", "100", "--k", "4", "--p", "0.2", "--seed", "1", "--out-dir", str(a)])
    run(["generate", "ws", "--n", "100", "--k", "4", "--p", "0.2", "--seed", "2", "--out-dir", str(b)])
    assert (a / "ws.tsv").read_bytes() != (b / "ws.tsv").read_bytes()


def test_missing_input_no_partial_files(tmp_path):
    out = tmp_path / "out"
    assert run(["predict-loo", "--in", str(tmp_path / "missing.tsv"), "--out-dir", str(out)]) == EXIT_MISSING_INPUT
    assert not out.exists() or not any(out.iterdir())


def test_error_codes(tmp_path, ratings_file):
    bad = tmp_path / "bad.tsv"
    bad.write_text("1\t2\t3\t4\n1\t2\t9\t4\n")
    out = tmp_path / "out"
    assert run(["stats", "--in", str(bad), "--out-dir", str(out)]) == EXIT_BAD_DATA
    assert run(["sweep-width", "--in", str(ratings_file), "--bogus", "--w", "1"]) == EXIT_USAGE
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run(["generate", "ws", "--n", "10", "--k", "3", "--out-dir", str(out)]) == EXIT_BAD_PARAMETER
    assert run(["benefit-experiment", "--in", str(ratings_file), "--items", str(ratings_file.parent / "u.item"),
                "--targets", "No Such Movie", "--out-dir", str(out)]) == EXIT_BAD_PARAMETER
    assert run(["benefit-experiment", "--in", str(ratings_file), "--items", str(tmp_path / "nope"),
                "--targets", "x", "--out-dir", str(out)]) == EXIT_MISSING_INPUT
    assert not out.exists() or not any(out.iterdir())


def test_range_parsing():
    assert int_range("1..5") == [1, 2, 3, 4, 5]
    assert int_range("9..1") == list(range(9, 0, -1))
    assert int_range("1..10..3") == [1, 4, 7, 10]
    assert int_range("4") == [4]
    assert p_grid("0,0.5,1") == [0.0, 0.5, 1.0]
    g = p_grid("log:1e-4..1..14")
    assert len(g) == 14 and g[0] == pytest.approx(1e-4) and g[-1] == pytest.approx(1.0)
