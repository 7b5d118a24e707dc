"""Achievable benefit for a newcomer adding ratings one at a time, four targets of falling popularity."""
import argparse

from _common import DATA, TARGETS, need_movielens, write_csv
from hammock.personalization import incremental_benefit_experiment
from hammock.ratings import find_artifact, load_ratings, load_titles

ap = argparse.ArgumentParser()
ap.add_argument("--repetitions", type=int, default=20)
ap.add_argument("--max-ratings", type=int, default=300)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

g = load_ratings(need_movielens())
titles = load_titles(DATA / "u.item")
targets = [find_artifact(titles, t) for t in TARGETS]
fm = incremental_benefit_experiment(g, targets, max_ratings=args.max_ratings, repetitions=args.repetitions,
                                    seed=args.seed)
nested = [fm.nested(r) for r in range(fm.repetitions)]
print(f"regions nested by popularity in {sum(nested)}/{len(nested)} repetitions")
for t, a in zip(TARGETS, targets):
    mb = fm.max_benefit(0, a)
    print(f"{t:30s} max benefit after 1/10/50/300 ratings: "
          + " ".join(f"{mb[n]:.0f}" for n in (1, 10, 50, min(300, args.max_ratings))))
write_csv("benefit.csv", ("target", "ratings_added", "benefit_bin", f"achievable_count_of_{args.repetitions}"),
          fm.rows())
