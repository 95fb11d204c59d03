"""Run a sweep plan and print per-group success rates next to the raw CSV."""
import argparse
import sys
from collections import defaultdict
from pathlib import Path

from pchyper.experiment import parse_plan, rows_to_csv, run_experiment


def summarize(rows):
    groups = defaultdict(lambda: [0, 0])
    for r in rows:
        key = (r["preset"], r["n"], r["ell"], r["coloring"], r["solver"])
        groups[key][0] += r["outcome"] == "found"
        groups[key][1] += 1
    lines = ["preset,n,ell,coloring,solver,found,runs,rate"]
    for key in sorted(groups):
        found, runs = groups[key]
        lines.append(",".join(map(str, key)) + f",{found},{runs},{found / runs:.3f}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("plan", type=Path)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, help="raw CSV destination")
    ap.add_argument("--no-wall-time", action="store_true")
    args = ap.parse_args(argv)

    rows = run_experiment(parse_plan(args.plan.read_text()), workers=args.workers)
    raw = rows_to_csv(rows, wall_time=not args.no_wall_time)
    if args.out:
        args.out.write_text(raw)
    else:
        sys.stdout.write(raw)
    sys.stderr.write(summarize(rows))
    disagree = [r for r in rows if r["agreement"] == "False"]
    if disagree:
        sys.stderr.write(f"{len(disagree)} rows where the absorbing solver contradicts the exact one\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
