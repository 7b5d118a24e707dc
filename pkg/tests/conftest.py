from pathlib import Path

import pytest

from hammock.ratings import load_ratings, load_titles

ROOT = Path(__file__).resolve().parents[1]
ML_DIR = ROOT / "data" / "ml-100k"


def _require(path: Path) -> Path:
    if not path.is_file():
        pytest.fail(f"{path} is missing; run `python3 scripts/fetch_movielens.py` first", pytrace=False)
    return path


@pytest.fixture(scope="session")
def ml_path() -> Path:
    return _require(ML_DIR / "u.data")


@pytest.fixture(scope="session")
def ml100k(ml_path):
    return load_ratings(ml_path)


@pytest.fixture(scope="session")
def ml_titles():
    return load_titles(_require(ML_DIR / "u.item"))


@pytest.fixture(scope="session")
def ml_predictor(ml100k):
    from hammock.predictor import NeighborPredictor
    return NeighborPredictor(ml100k)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2} {title}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
