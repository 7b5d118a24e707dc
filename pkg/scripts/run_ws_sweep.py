"""Watts-Strogatz L(p)/L(0), C(p)/C(0) and risk over a log grid of rewiring probabilities."""
import argparse
import os

import numpy as np

from _common import write_csv
from hammock.personalization import log_grid, p_risk_sweep, risk_from_length_curve

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=1000)
ap.add_argument("--k", type=int, default=10)
ap.add_argument("--trials", type=int, default=20)
ap.add_argument("--points", type=int, default=14)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
args = ap.parse_args()

grid = log_grid(1e-4, 1, args.points)
res = p_risk_sweep(args.n, args.k, grid, trials=args.trials, seed=args.seed, workers=args.workers)
# the same curve differentiated against log10 p, for comparison with log-axis plots
log_risk = risk_from_length_curve(np.log10(grid), res.L_scaled).risk
rows = [r + (lr,) for r, lr in zip(res.rows(), log_risk.tolist())]
for p, l, c, r, lr in rows:
    print(f"p={p:.2e} L={l:.3f} C={c:.3f} risk={r:.3g} risk_per_decade={lr:.3f}")
write_csv("ws_sweep.csv", res.COLUMNS + ("risk_per_decade",), rows)
