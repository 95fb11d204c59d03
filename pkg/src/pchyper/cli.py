"""Command-line front end.

Exit codes: 0 success, 1 negative result, 2 resource or budget exhausted, 3 input error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from contextlib import contextmanager

from .absorbers import count_absorbers
from .connecting import connect_ell, connect_loose, connect_tight
from .covering import greedy_path_cover
from .errors import (
    Infeasible,
    InvalidArgument,
    ParseError,
    PCError,
    SamplingFailure,
    StagedFailure,
    UnsupportedRegime,
)
from .exact import BUDGET, FOUND, SearchBudget, count_pc_hamilton, find_pc_hamilton_exact
from .experiment import parse_plan, rows_to_csv, run_experiment
from .generators import generate
from .hypergraph import format_instance, read_instance
from .paths import (
    KLCycle,
    format_certificate,
    is_hamilton,
    is_properly_colored,
    parse_certificates,
)
from .pipeline import PipelineConfig, find_pc_hamilton_absorbing
from .sampling import ReservoirSpec, reservoir_conditions, sample_reservoir, validate_reservoir

OK, NEGATIVE, BUDGET_EXIT, INPUT = 0, 1, 2, 3


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def parse_config(text: str) -> dict:
    """Parse key=value lines into PipelineConfig keyword arguments."""
    fields = {f.name: f for f in dataclasses.fields(PipelineConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in fields:
            raise InvalidArgument(f"line {lineno}: unknown config key {key!r}")
        default = fields[key].default
        try:
            if isinstance(default, bool):
                out[key] = val.lower() in ("1", "true", "yes", "on")
            elif isinstance(default, int) or key in ("q", "g"):
                out[key] = int(val)
            else:
                out[key] = float(val)
        except ValueError as exc:
            raise InvalidArgument(f"line {lineno}: {exc}") from exc
    return out


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def cmd_verify(args) -> int:
    H = read_instance(args.instance)
    with open(args.cert) as fh:
        certs = parse_certificates(fh.read())
    bad = 0
    with _output(args.out) as out:
        for X in certs:
            err = X.structural_error()
            if err is None:
                try:
                    pc = is_properly_colored(H, X)
                except PCError as exc:
                    pc, err = False, str(exc)
            else:
                pc = False
            ham = isinstance(X, KLCycle) and err is None and is_hamilton(H, X)
            status = "ok" if pc and err is None else f"invalid: {err or 'not properly colored'}"
            bad += status != "ok"
            out.write(f"{format_certificate(X)}\t{status}\thamilton={ham}\n")
    return OK if bad == 0 else NEGATIVE


def cmd_solve_exact(args) -> int:
    H = read_instance(args.instance)
    budget = SearchBudget(args.max_nodes, args.time_limit)
    with _output(args.out) as out:
        if args.count:
            res = count_pc_hamilton(H, args.ell, budget)
            out.write(f"count\t{res.count}\tstatus={res.status}\tnodes={res.nodes}\n")
            return BUDGET_EXIT if res.status == BUDGET else OK
        res = find_pc_hamilton_exact(H, args.ell, budget)
        if res.status == FOUND:
            out.write(format_certificate(res.cycle) + "\n")
            return OK
        out.write(f"# {res.status} after {res.nodes} nodes\n")
        return BUDGET_EXIT if res.status == BUDGET else NEGATIVE


def cmd_solve_absorb(args) -> int:
    H = read_instance(args.instance)
    kw = {}
    if args.config:
        with open(args.config) as fh:
            kw = parse_config(fh.read())
    kw["seed"] = args.seed
    kw["asymptotic_constants"] = args.asymptotic_constants or kw.get("asymptotic_constants", False)
    cfg = PipelineConfig(**kw)
    res = find_pc_hamilton_absorbing(H, args.ell, cfg, args.variant)
    with _output(args.out) as out:
        if res.cycle is not None:
            out.write(format_certificate(res.cycle) + "\n")
        # stage table as comment lines so the output stays a valid certificate file for verify
        out.write("# stage,outcome,counters\n")
        for r in res.reports:
            out.write(f"# {r.stage},{r.outcome}," + ";".join(f"{k}={v}" for k, v in r.counters.items()) + "\n")
    return OK if res.status == "found" else NEGATIVE


def cmd_connect(args) -> int:
    H = read_instance(args.instance)
    k, ell = H.k, args.ell
    a, b = _ints(args.from_), _ints(args.to)
    avoid = _ints(args.avoid) if args.avoid else []
    cx, cy = (_ints(args.forbid_colors) + [0, 0])[:2] if args.forbid_colors else (0, 0)
    if ell == k - 1:
        P = connect_tight(H, a, b, avoid, max_len=args.max_len)
    elif (k, ell) == (3, 1) and args.variant == "loose":
        if len(a) != 1 or len(b) != 1:
            raise InvalidArgument("loose connections join single vertices")
        P = connect_loose(H, a[0], b[0], cx, cy, avoid, seed=args.seed)
    else:
        P = connect_ell(H, a, b, cx, cy, avoid, seed=args.seed)
    with _output(args.out) as out:
        if P is None:
            out.write("# none\n")
            return NEGATIVE
        out.write(format_certificate(P) + "\n")
    return OK


def cmd_cover(args) -> int:
    H = read_instance(args.instance)
    res = greedy_path_cover(H, args.ell, args.delta, args.q, args.seed)
    with _output(args.out) as out:
        for P in res.paths:
            out.write(format_certificate(P) + "\n")
        covered = len(H.vertices) - len(res.uncovered)
        out.write(
            f"# paths={len(res.paths)} covered={covered} uncovered={len(res.uncovered)} "
            f"target={res.target} shortfall={res.shortfall}\n"
        )
    return OK


def cmd_count_absorbers(args) -> int:
    H = read_instance(args.instance)
    if args.target:
        targets = [_ints(t) for t in args.target]
    elif args.kind == "tight":
        targets = [[v] for v in sorted(H.vertices)]
    else:
        raise InvalidArgument(f"--target is required for kind {args.kind}")
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["instance", "target", "total", "pc"])
        for t in targets:
            target = t[0] if args.kind == "tight" else (tuple(t) if args.kind == "pair" else frozenset(t))
            total, pc = count_absorbers(H, target, args.kind, args.cap)
            w.writerow([args.instance, " ".join(map(str, t)), "" if args.pc_only else total, pc])
    return OK


def cmd_sample_reservoir(args) -> int:
    H = read_instance(args.instance)
    V = sorted(H.vertices)
    spec = ReservoirSpec(args.p, retries=args.retries)
    res = sample_reservoir(V, spec, args.seed)
    checks = reservoir_conditions(V, res.R, spec)
    with _output(args.out) as out:
        out.write("R: " + " ".join(map(str, sorted(res.R))) + "\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["check", "value"])
        w.writerow(["attempt", res.attempt])
        for key, ok in sorted(checks.items()):
            w.writerow([f"condition_{key}", ok])
        if args.variant:
            ell = args.ell if args.ell is not None else H.k - 1
            rep = validate_reservoir(H, res.R, args.variant, args.trials, args.seed, ell=ell)
            w.writerow(["connect_success_fraction", f"{rep.success_fraction:.4f}"])
            if args.variant == "loose":
                w.writerow(["matching_fraction", f"{rep.matching_fraction:.4f}"])
    return OK


def cmd_gen(args) -> int:
    inst = generate(args.preset, args.n, args.k, args.gamma, args.coloring, args.seed, args.removal)
    with _output(args.out) as out:
        for note in inst.notes:
            out.write(f"# {note}\n")
        if inst.report is not None:
            r = inst.report
            out.write(f"# regime={r.regime} gamma_margin={r.gamma_margin:.6f} c_margin={r.c_margin:.6f}\n")
        out.write(format_instance(inst.H))
    return OK


def cmd_experiment(args) -> int:
    with open(args.plan) as fh:
        plan = parse_plan(fh.read())
    if args.seed is not None:
        plan.master_seed = args.seed
    rows = run_experiment(plan, args.workers)
    with _output(args.out) as out:
        out.write(rows_to_csv(rows, wall_time=not args.no_wall_time))
    return OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; argparse's own code 2 would read as a budget stop
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    p = _Parser(prog="pchyper", description="Properly colored Hamilton cycles in edge-colored hypergraphs")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("verify", cmd_verify, "validate certificate lines against an instance")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--cert", required=True)

    sp = add("solve-exact", cmd_solve_exact, "exhaustive search for a pc Hamilton cycle")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--count", action="store_true")
    sp.add_argument("--max-nodes", type=int, default=10_000_000)
    sp.add_argument("--time-limit", type=float, default=60.0)

    sp = add("solve-absorb", cmd_solve_absorb, "absorbing-method pipeline")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--variant", choices=["tight", "ell", "loose"])
    sp.add_argument("--config")
    sp.add_argument("--asymptotic-constants", action="store_true")

    sp = add("connect", cmd_connect, "short pc connecting path between two ends")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--from", dest="from_", required=True, help="comma-separated end vertices")
    sp.add_argument("--to", required=True)
    sp.add_argument("--avoid")
    sp.add_argument("--forbid-colors", help="a,b: colors the first and last edge must avoid")
    sp.add_argument("--variant", choices=["ell", "loose"], default="loose")
    sp.add_argument("--max-len", type=int)

    sp = add("cover", cmd_cover, "greedy cover by disjoint pc paths")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--delta", type=float, default=0.05)
    sp.add_argument("--q", type=int, default=100)

    sp = add("count-absorbers", cmd_count_absorbers, "count absorbers for targets as CSV")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--kind", choices=["tight", "set", "pair"], required=True)
    sp.add_argument("--target", action="append", help="comma-separated target; repeatable")
    sp.add_argument("--pc-only", action="store_true")
    sp.add_argument("--cap", type=int)

    sp = add("sample-reservoir", cmd_sample_reservoir, "sample and check a reservoir set")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--variant", choices=["tight", "ell", "loose"])
    sp.add_argument("--ell", type=int)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--retries", type=int, default=64)

    sp = add("gen", cmd_gen, "generate an instance")
    sp.add_argument("--preset", choices=["complete", "dirac", "loose"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--gamma", type=float, default=0.1)
    sp.add_argument("--coloring", default="rainbow")
    sp.add_argument("--removal", choices=["random", "structured"], default="random")

    sp = add("experiment", cmd_experiment, "run a sweep described by a key=value plan")
    sp.add_argument("--plan", required=True)
    sp.add_argument("--no-wall-time", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, InvalidArgument, UnsupportedRegime, Infeasible, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT
    except (SamplingFailure, StagedFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE
    except MemoryError:
        return BUDGET_EXIT


if __name__ == "__main__":
    sys.exit(main())
