"""Connectivity, reachability, L and C of the MovieLens social network for w = 1..120."""
import argparse
import time

from _common import need_movielens, write_csv
from hammock.metrics import WidthRow, width_statistics
from hammock.ratings import load_ratings

ap = argparse.ArgumentParser()
ap.add_argument("--max-w", type=int, default=120)
ap.add_argument("--coverage-min-raters", type=int, default=2)
args = ap.parse_args()

g = load_ratings(need_movielens())
rows = []
t0 = time.perf_counter()
for w in range(1, args.max_w + 1):
    row = width_statistics(g, w, coverage_min_raters=args.coverage_min_raters)
    rows.append(row.as_row())
    print(" ".join(f"{c}={v:.4g}" for c, v in zip(WidthRow.COLUMNS, row.as_row())))
print(f"{time.perf_counter() - t0:.0f}s")
write_csv("width_sweep.csv", WidthRow.COLUMNS, rows)
