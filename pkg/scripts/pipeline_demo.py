"""Generate one host, run the absorbing pipeline on it and show what each stage did."""
import argparse
import sys

from pchyper.generators import generate
from pchyper.paths import format_certificate
from pchyper.pipeline import PipelineConfig, find_pc_hamilton_absorbing


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="complete", choices=["complete", "dirac", "loose"])
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--ell", type=int, default=2)
    ap.add_argument("--gamma", type=float, default=0.1)
    ap.add_argument("--coloring", default="rainbow")
    ap.add_argument("--variant", choices=["tight", "ell", "loose"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    inst = generate(args.preset, args.n, args.k, args.gamma, args.coloring, args.seed)
    H = inst.H
    print(f"host: n={H.n} k={H.k} edges={len(H)} colors={inst.num_colors}")
    if inst.report is not None:
        print(f"  regime={inst.report.regime} gamma={inst.report.gamma_margin:.3f} c={inst.report.c_margin:.3f}")
    for note in inst.notes:
        print(f"  note: {note}")

    res = find_pc_hamilton_absorbing(H, args.ell, PipelineConfig(seed=args.seed), args.variant)
    print(f"status={res.status} attempts={res.attempts}")
    for rep in res.reports:
        counters = " ".join(f"{k}={v}" for k, v in rep.counters.items())
        print(f"  {rep.stage:<15} {rep.outcome:<9} {counters}")
    if res.cycle is not None:
        print(format_certificate(res.cycle))
        return 0
    return 1


if __name__ == "__main__":
    sys.exit(main())
