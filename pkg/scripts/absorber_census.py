"""Count absorbers per target on small complete hosts under several colorings."""
import argparse
import sys

from pchyper.absorbers import count_absorbers
from pchyper.generators import gen_complete


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--colorings", nargs="+", default=["rainbow", "random_bounded:1", "random_bounded:2", "adversarial_link:0"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print("coloring,kind,target,total,pc,pc_share")
    for col in args.colorings:
        H = gen_complete(args.n, 3, col, args.seed).H
        jobs = [("tight", v) for v in (0, args.n - 1)] + [("pair", (0, 1)), ("pair", (1, args.n - 1))]
        for kind, target in jobs:
            total, pc = count_absorbers(H, target, kind)
            share = pc / total if total else 0.0
            label = target if isinstance(target, int) else "-".join(map(str, target))
            print(f"{col},{kind},{label},{total},{pc},{share:.4f}")
            sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
