"""Experiment sweeps: a flat key=value plan expands into cells, each cell yields one CSV row per solver."""
from __future__ import annotations

import csv
import hashlib
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import InvalidArgument, PCError
from .exact import BUDGET, FOUND, NONE, SearchBudget, find_pc_hamilton_exact
from .generators import generate
from .paths import format_certificate, is_hamilton, is_properly_colored
from .pipeline import PipelineConfig, find_pc_hamilton_absorbing
from .rng import derive_seed

SOLVERS = ("exact", "absorbing")
COLUMNS = [
    "cell", "preset", "n", "k", "ell", "gamma", "coloring", "rep", "solver",
    "outcome", "cert_hash", "certificate", "nodes", "attempts", "failed_stage",
    "counters", "agreement", "error", "wall_time",
]
LIST_KEYS = ("preset", "n", "k", "ell", "gamma", "coloring", "seeds", "solvers")


@dataclass
class Plan:
    preset: list[str] = field(default_factory=lambda: ["complete"])
    n: list[int] = field(default_factory=list)
    k: list[int] = field(default_factory=lambda: [3])
    ell: list[int] = field(default_factory=lambda: [2])
    gamma: list[float] = field(default_factory=lambda: [0.1])
    coloring: list[str] = field(default_factory=lambda: ["rainbow"])
    seeds: list[int] = field(default_factory=lambda: [0])
    solvers: list[str] = field(default_factory=lambda: ["exact"])
    variant: str = "loose"
    master_seed: int = 0
    max_nodes: int = 2_000_000
    time_limit: float = 30.0

    def cells(self) -> list[dict]:
        combos = itertools.product(self.preset, self.n, self.k, self.ell, self.gamma, self.coloring, self.seeds)
        keys = ("preset", "n", "k", "ell", "gamma", "coloring", "rep")
        return [dict(zip(keys, c), cell=i) for i, c in enumerate(combos)]


def parse_plan(text: str) -> Plan:
    """Parse ``key = v1, v2`` lines. Blank lines and '#' comments are ignored."""
    casts = {"n": int, "k": int, "ell": int, "gamma": float, "seeds": int}
    kw: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            if key in LIST_KEYS:
                items = [v.strip() for v in val.split(",") if v.strip()]
                kw[key] = [casts.get(key, str)(v) for v in items]
            elif key in ("master_seed", "max_nodes"):
                kw[key] = int(val)
            elif key == "time_limit":
                kw[key] = float(val)
            elif key == "variant":
                kw[key] = val
            else:
                raise InvalidArgument(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise InvalidArgument(f"line {lineno}: {exc}") from exc
    plan = Plan(**kw)
    bad = set(plan.solvers) - set(SOLVERS)
    if bad:
        raise InvalidArgument(f"unknown solvers {sorted(bad)}")
    return plan


def cert_hash(cert: str) -> str:
    return hashlib.sha256(cert.encode()).hexdigest()[:16] if cert else ""


def _row(cell: dict, solver: str, **kw) -> dict:
    row = {c: "" for c in COLUMNS}
    row.update({k: cell[k] for k in ("cell", "preset", "n", "k", "ell", "gamma", "coloring", "rep")})
    row["solver"] = solver
    row.update(kw)
    return row


def run_cell(plan: Plan, cell: dict) -> list[dict]:
    """Generate the cell's instance and run every requested solver on it. Errors become rows."""
    seed = derive_seed(plan.master_seed, cell["cell"], cell["rep"])
    rows = []
    try:
        inst = generate(cell["preset"], cell["n"], cell["k"], cell["gamma"], cell["coloring"], seed)
    except PCError as exc:
        return [_row(cell, s, outcome="error", error=f"{exc.kind}: {exc}") for s in plan.solvers]
    H, ell = inst.H, cell["ell"]
    for solver in plan.solvers:
        t0 = time.perf_counter()
        try:
            if solver == "exact":
                res = find_pc_hamilton_exact(H, ell, SearchBudget(plan.max_nodes, plan.time_limit))
                cert = format_certificate(res.cycle) if res.cycle else ""
                row = _row(cell, solver, outcome=res.status, certificate=cert, nodes=res.nodes)
            else:
                variant = plan.variant if (H.k, ell) == (3, 1) else None
                res = find_pc_hamilton_absorbing(H, ell, PipelineConfig(seed=seed), variant)
                cert = format_certificate(res.cycle) if res.cycle else ""
                counters = ";".join(
                    f"{r.stage}.{k}={v}" for r in res.reports for k, v in r.counters.items()
                )
                row = _row(
                    cell, solver, outcome=FOUND if res.status == "found" else "failed",
                    certificate=cert, attempts=res.attempts, failed_stage=res.failed_stage or "",
                    counters=counters,
                )
                if res.cycle is not None and not (is_hamilton(H, res.cycle) and is_properly_colored(H, res.cycle)):
                    row["error"] = "certificate failed re-validation"
            row["cert_hash"] = cert_hash(cert)
        except PCError as exc:
            row = _row(cell, solver, outcome="error", error=f"{exc.kind}: {exc}")
        except Exception as exc:  # a sweep never aborts on one cell
            row = _row(cell, solver, outcome="error", error=f"{type(exc).__name__}: {exc}")
        row["wall_time"] = f"{time.perf_counter() - t0:.4f}"
        rows.append(row)
    by = {r["solver"]: r for r in rows}
    if "exact" in by and "absorbing" in by:
        ex, ab = by["exact"]["outcome"], by["absorbing"]["outcome"]
        if ex == BUDGET or "error" in (ex, ab):
            agree = ""
        else:
            # the absorbing solver may give up; it must never report a cycle the exact search rules out
            agree = str(not (ab == FOUND and ex == NONE))
        for r in rows:
            r["agreement"] = agree
    return rows


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(plan: Plan, workers: int = 1) -> list[dict]:
    cells = plan.cells()
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_run_cell_args, [(plan, c) for c in cells]))
    else:
        chunks = [run_cell(plan, c) for c in cells]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["cell"], SOLVERS.index(r["solver"])))
    return rows


def rows_to_csv(rows: list[dict], wall_time: bool = True) -> str:
    cols = COLUMNS if wall_time else [c for c in COLUMNS if c != "wall_time"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
