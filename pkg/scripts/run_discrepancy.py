"""Leave-one-out prediction error against hammock width and against path length."""
import argparse

from _common import need_movielens, write_csv
from hammock.predictor import NeighborPredictor, bucket_means, leave_one_out, width_decile_trend
from hammock.ratings import load_ratings

ap = argparse.ArgumentParser()
ap.add_argument("--sample", type=int, default=None, help="masked ratings (default: all)")
ap.add_argument("--min-width", type=int, default=113)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

g = load_ratings(need_movielens())
pred = NeighborPredictor(g)
outs = leave_one_out(g, "by_width", sample=args.sample, seed=args.seed, predictor=pred)
tr = width_decile_trend(outs)
print(f"spearman rho over width deciles: {tr.rho:.3f}")
write_csv("discrepancy_by_width.csv", ("decile", "width_lo", "width_hi", "count", "mean_abs_error"),
          [(i, tr.edges[i], tr.edges[i + 1], int(tr.counts[i]), tr.means[i]) for i in range(len(tr.counts))])

paths = leave_one_out(g, "by_path_bucket", min_width=args.min_width, sample=args.sample, seed=args.seed,
                      predictor=pred)
bm = bucket_means(paths)
for b, (m, n) in bm.items():
    print(f"bucket {b}: mean |error| {m:.4f} over {n}")
write_csv("discrepancy_by_bucket.csv", ("bucket", "count", "mean_abs_error"),
          [(b, n, m) for b, (m, n) in bm.items()])
