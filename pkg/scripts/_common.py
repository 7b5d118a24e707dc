"""Shared bits for the experiment scripts."""
import csv
import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data" / "ml-100k"
RESULTS = ROOT / "results"

TARGETS = ["Star Wars (1977)", "Tomorrow Never Dies", "Robin Hood: Men in Tights", "Scream of Stone"]


def need_movielens():
    if not (DATA / "u.data").is_file():
        sys.exit(f"{DATA / 'u.data'} missing; run scripts/fetch_movielens.py first")
    return DATA / "u.data"


def write_csv(name, columns, rows):
    RESULTS.mkdir(exist_ok=True)
    path = RESULTS / name
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
    os.replace(tmp, path)
    print(f"wrote {path}")
