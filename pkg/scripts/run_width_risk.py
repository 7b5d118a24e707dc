"""Risk of lowering the hammock width on the three-community dataset (and optionally MovieLens)."""
import argparse

from _common import DATA, write_csv
from hammock.generators import ThreeCommunityConfig, generate_three_community
from hammock.personalization import width_risk_sweep
from hammock.ratings import load_ratings

ap = argparse.ArgumentParser()
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--length", choices=("harmonic", "connected", "largest"), default="harmonic")
ap.add_argument("--movielens", action="store_true", help="also sweep MovieLens w = 30..1, baseline 17")
args = ap.parse_args()


def report(name, res):
    for (w, s, r), c, n in zip(res.rows(), res.component_count[::-1], res.non_singleton_count[::-1]):
        print(f"{name} w={w:3d} scaled={s:.4f} risk={r:.4f} components={c} non_singleton={n}")
    print(f"{name}: risk peaks at w={res.peak_w}; one non-singleton component from w={res.first_connected_w()}")
    write_csv(f"width_risk_{name}.csv", ("w", "scaled_length", "risk"), res.rows())


g = generate_three_community(ThreeCommunityConfig(seed=args.seed))
report("three_community", width_risk_sweep(g, range(9, 0, -1), baseline_w=8, how=args.length))
if args.movielens:
    ml = load_ratings(DATA / "u.data")
    report("movielens", width_risk_sweep(ml, range(30, 0, -1), baseline_w=17, how=args.length))
