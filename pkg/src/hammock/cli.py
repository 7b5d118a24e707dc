"""Command-line front end.

Every command writes CSV/TSV files plus a ``run.json`` manifest into
``--out-dir``.  Files are staged in memory and moved into place only after the
whole command succeeds, so a failed run leaves nothing behind.  Identical
arguments and seed give byte-identical outputs regardless of ``--workers``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .generators import ThreeCommunityConfig, WattsStrogatzConfig, generate_three_community, watts_strogatz
from .jumps import RecommenderGraph, induce_social_network, tie_report
from .metrics import WidthRow, connected_components, width_statistics
from .personalization import (FeasibilityMatrix, PSweepResult, incremental_benefit_experiment, log_grid,
                              p_risk_sweep, width_risk_sweep)
from .predictor import PredictionOutcome, bucket_means, leave_one_out, width_decile_trend
from .ratings import FORMATS, RatingDataError, degree_stats, find_artifact, load_ratings, load_titles

log = logging.getLogger("hammock")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_MISSING_INPUT = 3
EXIT_BAD_DATA = 4
EXIT_BAD_PARAMETER = 5


class MissingInput(Exception):
    pass


# -- argument types --------------------------------------------------------------

def int_range(text: str) -> list[int]:
    """``lo..hi[..step]`` inclusive; descending when lo > hi.  A bare integer is a one-element range."""
    parts = text.split("..")
    try:
        nums = [int(x) for x in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) not in (2, 3):
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}")
    lo, hi = nums[0], nums[1]
    step = abs(nums[2]) if len(nums) == 3 else 1
    if step == 0:
        raise argparse.ArgumentTypeError("range step must be non-zero")
    return list(range(lo, hi + 1, step)) if lo <= hi else list(range(lo, hi - 1, -step))


def p_grid(text: str) -> list[float]:
    """``log:lo..hi..count`` or a comma-separated list."""
    try:
        if text.startswith("log:"):
            lo, hi, count = text[4:].split("..")
            return log_grid(float(lo), float(hi), int(count)).tolist()
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p grid {text!r}") from None


def scale_arg(text: str) -> tuple[int, int]:
    r = text.split("..")
    try:
        lo, hi = int(r[0]), int(r[1])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"bad rating scale {text!r}") from None
    return lo, hi


# -- output staging --------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def table(columns, rows, delimiter=",") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def commit(out_dir: Path, files: dict[str, str]):
    """Write every file via a temp name in ``out_dir``, then rename them all."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out_dir / name))
        for tmp, final in staged:
            os.replace(tmp, final)
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise


def manifest(args) -> str:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("out_dir", "workers", "func", "verbose")}
    doc = {"command": args.command, "config": config, "seed": getattr(args, "seed", None),
           "version": __version__}
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


# -- commands --------------------------------------------------------------------

def _load(args):
    path = Path(args.input)
    if not path.is_file():
        raise MissingInput(f"input file not found: {path}")
    return load_ratings(path, format=args.format, scale=args.scale, header=args.header)


def cmd_ingest(args):
    g = _load(args)
    rows = zip(g.person.tolist(), g.artifact.tolist(), g.value.tolist())
    return {"ratings.tsv": table(("person", "artifact", "rating"), rows, delimiter="\t")}


def cmd_stats(args):
    g = _load(args)
    d = degree_stats(g)
    hist = [("person", k, v) for k, v in d.person_histogram.items()]
    hist += [("artifact", k, v) for k, v in d.artifact_histogram.items()]
    pdeg = list(d.person_degrees.values()) or [0]
    adeg = list(d.artifact_degrees.values()) or [0]
    summary = [("people", g.n_people), ("artifacts", g.n_artifacts), ("ratings", g.n_ratings),
               ("min_person_degree", min(pdeg)), ("max_person_degree", max(pdeg)),
               ("min_artifact_degree", min(adeg)), ("max_artifact_degree", max(adeg))]
    return {"degree_histogram.csv": table(("side", "degree", "frequency"), hist),
            "summary.csv": table(("key", "value"), summary)}


def cmd_induce(args):
    g = _load(args)
    s = induce_social_network(g, args.w)
    files = {
        "social.tsv": table(("person_a", "person_b", "common_count"),
                            zip(s.src.tolist(), s.dst.tolist(), s.weight.tolist()), delimiter="\t"),
        "statistics.csv": table(WidthRow.COLUMNS, [width_statistics(g, args.w, args.coverage_min_raters).as_row()]),
    }
    if args.ties:
        rep = tie_report(s)
        files["triads.tsv"] = table(("a", "b", "c"), rep.triads, delimiter="\t")
        files["bridges.tsv"] = table(("person_a", "person_b"), rep.bridges, delimiter="\t")
    return files


def _width_row(job):
    g, w, min_raters, with_paths = job
    return width_statistics(g, w, min_raters, with_paths).as_row()


def _pmap(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


def cmd_sweep_width(args):
    g = _load(args)
    jobs = [(g, w, args.coverage_min_raters, not args.no_paths) for w in args.w]
    rows = _pmap(_width_row, jobs, args.workers)
    return {"sweep_width.csv": table(WidthRow.COLUMNS, rows)}


def cmd_sweep_p(args):
    WattsStrogatzConfig(args.n, args.k, 0.0, args.seed)
    res: PSweepResult = p_risk_sweep(args.n, args.k, args.p, args.trials, args.seed, args.workers)
    return {"sweep_p.csv": table(PSweepResult.COLUMNS, res.rows())}


def cmd_risk_width(args):
    if args.three_community:
        g = generate_three_community(ThreeCommunityConfig(seed=args.seed))
    elif args.input:
        g = _load(args)
    else:
        raise ValueError("risk-width needs --in or --three-community")
    res = width_risk_sweep(g, args.w, args.baseline, how=args.length)
    rows = [(w, s, r, c, n) for (w, s, r), c, n in
            zip(res.rows(), res.component_count[::-1].tolist(), res.non_singleton_count[::-1].tolist())]
    return {"risk_width.csv": table(("w", "scaled_length", "risk", "component_count", "non_singleton_count"), rows)}


def _targets(args, g):
    titles = None
    if args.items:
        if not Path(args.items).is_file():
            raise MissingInput(f"item file not found: {args.items}")
        titles = load_titles(args.items)
    out = []
    for t in args.targets.split(";"):
        t = t.strip()
        if t.isdigit():
            out.append(int(t))
        elif titles is None:
            raise ValueError(f"title {t!r} given but no --items file")
        else:
            out.append(find_artifact(titles, t))
    return out


def cmd_benefit(args):
    g = _load(args)
    targets = _targets(args, g)
    fm: FeasibilityMatrix = incremental_benefit_experiment(
        g, targets, max_ratings=args.max_ratings, repetitions=args.repetitions, w_range=args.w,
        seed=args.seed, bin_width=args.bin_width, workers=args.workers)
    cols = ("target", "ratings_added", "benefit_bin", f"achievable_count_of_{args.repetitions}")
    nest = [(r, int(fm.nested(r))) for r in range(fm.repetitions)]
    return {"benefit.csv": table(cols, fm.rows()),
            "nesting.csv": table(("repetition", "nested"), nest)}


def cmd_predict_loo(args):
    g = _load(args)
    sample = None if args.full else args.sample
    outs = leave_one_out(g, args.mode, min_width=args.min_width, sample=sample, seed=args.seed)
    files = {"predictions.csv": table(PredictionOutcome.COLUMNS, (o.as_row() for o in outs))}
    if args.mode == "by_width":
        tr = width_decile_trend(outs)
        rows = [(i, tr.edges[i], tr.edges[i + 1], tr.counts[i], tr.means[i]) for i in range(len(tr.counts))]
        files["width_trend.csv"] = table(("decile", "width_lo", "width_hi", "count", "mean_abs_error"), rows)
        files["summary.csv"] = table(("key", "value"), [("spearman_rho", tr.rho)])
    else:
        rows = [(b, n, m) for b, (m, n) in bucket_means(outs).items()]
        files["bucket_means.csv"] = table(("bucket", "count", "mean_abs_error"), rows)
    return files


def cmd_generate(args):
    if args.world == "ws":
        cfg = WattsStrogatzConfig(args.n, args.k, args.p, args.seed)
        gr = watts_strogatz(cfg)
        return {"ws.tsv": table(("u", "v", "weight"), zip(gr.src.tolist(), gr.dst.tolist(), gr.weight.tolist()),
                                delimiter="\t")}
    eps = None if args.epsilon == "auto" else float(args.epsilon)
    g = generate_three_community(ThreeCommunityConfig(epsilon=eps, seed=args.seed))
    return {"ratings.tsv": table(("person", "artifact", "rating"),
                                 zip(g.person.tolist(), g.artifact.tolist(), g.value.tolist()), delimiter="\t")}


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out-dir", type=Path, default=Path("out"))
    common.add_argument("-v", "--verbose", action="store_true")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--in", dest="input", required=True, help="rating file")
    data.add_argument("--format", choices=FORMATS, default="movielens-tab")
    data.add_argument("--header", action="store_true", help="generic-tsv file has a header row")
    data.add_argument("--scale", type=scale_arg, default=(1, 5), help="rating scale lo..hi")

    ap = argparse.ArgumentParser(prog="hammock", description="Hammock-jump social network experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common, data], help="validate and export ratings as sorted TSV")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", parents=[common, data], help="degree statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("induce", parents=[common, data], help="induce the social network at one width")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--ties", action="store_true", help="also write triads and bridges")
    p.add_argument("--coverage-min-raters", type=int, default=1)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("sweep-width", parents=[common, data], help="connectivity/reachability per width")
    p.add_argument("--w", type=int_range, required=True, help="lo..hi[..step]")
    p.add_argument("--coverage-min-raters", type=int, default=1,
                   help="raters an artifact needs inside the component to count as reachable (2 = leave-one-out)")
    p.add_argument("--no-paths", action="store_true", help="skip L and C")
    p.set_defaults(func=cmd_sweep_width)

    p = sub.add_parser("sweep-p", parents=[common], help="Watts-Strogatz risk vs rewiring probability")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--p", type=p_grid, default=log_grid(1e-4, 1, 14).tolist(), help="log:lo..hi..count or a,b,c")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_sweep_p)

    p = sub.add_parser("risk-width", parents=[common], help="risk vs hammock width")
    p.add_argument("--in", dest="input")
    p.add_argument("--format", choices=FORMATS, default="generic-tsv")
    p.add_argument("--header", action="store_true")
    p.add_argument("--scale", type=scale_arg, default=(1, 5))
    p.add_argument("--three-community", action="store_true", help="use the synthetic three-community dataset")
    p.add_argument("--w", type=int_range, default=int_range("9..1"))
    p.add_argument("--baseline", type=int, default=8)
    p.add_argument("--length", choices=("harmonic", "connected", "largest"), default="harmonic")
    p.set_defaults(func=cmd_risk_width)

    p = sub.add_parser("benefit-experiment", parents=[common, data], help="incremental-rating benefit")
    p.add_argument("--items", help="MovieLens u.item for title lookups")
    p.add_argument("--targets", required=True, help="';'-separated titles or artifact IDs")
    p.add_argument("--max-ratings", type=int, default=300)
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--w", type=int_range, default=int_range("1..20"))
    p.add_argument("--bin-width", type=float, default=1.0)
    p.set_defaults(func=cmd_benefit)

    p = sub.add_parser("predict-loo", parents=[common, data], help="leave-one-out prediction discrepancy")
    p.add_argument("--mode", choices=("by_width", "by_path_bucket"), default="by_width")
    p.add_argument("--min-width", type=int, default=113)
    p.add_argument("--sample", type=int, default=10000)
    p.add_argument("--full", action="store_true", help="mask every rating instead of a sample")
    p.set_defaults(func=cmd_predict_loo)

    p = sub.add_parser("generate", parents=[common], help="synthetic datasets")
    gsub = p.add_subparsers(dest="world", required=True)
    q = gsub.add_parser("ws", parents=[common], help="Watts-Strogatz graph")
    q.add_argument("--n", type=int, default=1000)
    q.add_argument("--k", type=int, default=10)
    q.add_argument("--p", type=float, default=0.0)
    q.set_defaults(func=cmd_generate)
    q = gsub.add_parser("three-community", parents=[common], help="three power-law communities plus bridges")
    q.add_argument("--epsilon", default="auto")
    q.set_defaults(func=cmd_generate)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        files = args.func(args)
        files["run.json"] = manifest(args)
        commit(args.out_dir, files)
    except MissingInput as e:
        log.error("%s", e)
        return EXIT_MISSING_INPUT
    except RatingDataError as e:
        log.error("bad rating data: %s", e)
        return EXIT_BAD_DATA
    except (ValueError, KeyError) as e:
        log.error("invalid parameters: %s", e)
        return EXIT_BAD_PARAMETER
    except OSError as e:
        log.error("%s", e)
        return EXIT_ERROR
    for name in sorted(files):
        print(args.out_dir / name)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
