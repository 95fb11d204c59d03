"""End-to-end absorbing-method solver.

Stages: absorbing path, reservoir, greedy cover, connection into one cycle, absorption of the
leftover, final validation. Every stage emits a ``StageReport``.
"""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Any

from .absorbers import (
    PairAbsorber,
    SetAbsorber,
    TightAbsorber,
    absorb,
    build_absorbable_graph,
    enumerate_absorbers,
    find_set_witness,
    is_pc_absorber,
)
from .connecting import connect_many, default_max_len
from .covering import greedy_path_cover, perfect_matching
from .errors import (
    ColoringConflict,
    InternalError,
    InvalidAbsorber,
    InvalidArgument,
    MissingEdge,
    PlacementError,
    SamplingFailure,
    StagedFailure,
    UnsupportedRegime,
)
from .hypergraph import ColoredKGraph, check_hypotheses
from .paths import KLCycle, KLPath, is_hamilton, is_properly_colored
from .rng import derive_seed
from .sampling import FamilySpec, ReservoirSpec, sample_absorber_family, sample_reservoir

VARIANTS = ("tight", "ell", "loose")


@dataclass
class PipelineConfig:
    """Tunable constants. Desk defaults; ``asymptotic_constants`` swaps in the asymptotic formulas."""

    lam: float = 0.1
    rho: float = 0.1
    delta: float = 0.05
    alpha: float = 0.25
    q: int | None = None
    g: int | None = None
    gamma: float | None = None
    c: float | None = None
    absorbable_threshold: int = 1
    family_floor: int = 1
    absorber_cap: int = 40
    family_targets: int = 12
    min_path_edges: int = 3
    retries: int = 4
    sampling_retries: int = 64
    search_nodes: int = 20_000
    rescan: bool = True
    asymptotic_constants: bool = False
    seed: int = 0

    def __post_init__(self):
        for name in ("lam", "rho", "delta", "alpha"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise InvalidArgument(f"{name} must lie in (0, 1), got {v}")
        if self.g is not None and self.g < 1:
            raise InvalidArgument("g must be at least 1")
        if self.retries < 1 or self.sampling_retries < 1:
            raise InvalidArgument("retry counts must be positive")


def asymptotic_parameters(k: int, ell: int, gamma: float, variant: str) -> dict[str, float]:
    """The asymptotic constants of the three regimes, for documentation parity."""
    if variant == "tight":
        lam = 0.25 * (gamma / 2) ** (2 * k)
        return {
            "lam": lam,
            "rho": lam / 2,
            "delta": lam / 2,
            "g": 64 * k / gamma**2 - (4 * k - 4),
            "alpha": (gamma / 2) ** k / (4 * k - 4) ** 2,
            "absorber_lower_bound_coeff": 4 * (gamma / 2) ** k,
        }
    if variant == "ell":
        t = 3 * k - 2 * ell
        lam = (gamma / 4) ** (1 / 5)
        a = math.factorial(3 * k - 4 * ell) ** 2 / (
            2 ** (22 + 6 * k) * k**8 * math.factorial(t) ** 4 * t**2
        )
        b = math.factorial(3 * k - 4 * ell) / (5 * 2 ** (8 + 3 * k) * k**4 * math.factorial(t) ** 2)
        zeta = lam**5 * math.factorial(3 * k - 4 * ell) / (2 ** (6 + 3 * k) * k**4 * math.factorial(t))
        return {
            "lam": lam,
            "rho": a * gamma**2 / 32,
            "delta": a * gamma**2 / 32,
            "g": 3 * k - 4 * ell,
            "alpha": zeta / (2 * math.factorial(t) * t**2),
            "a": a,
            "b": b,
            "zeta": zeta,
        }
    if variant == "loose":
        lam = min(1e-14, gamma / 25)
        return {
            "lam": lam,
            "rho": lam**2,
            "delta": lam**2 / 200,
            "g": 5,
            "alpha": lam,
            "absorbable_threshold_coeff": 1 / 16 / 30**7,
        }
    raise InvalidArgument(f"unknown variant {variant!r}")


def resolve_variant(k: int, ell: int, variant: str | None) -> str:
    if variant is not None:
        if variant not in VARIANTS:
            raise InvalidArgument(f"variant must be one of {VARIANTS}")
        if variant == "tight" and ell != k - 1:
            raise InvalidArgument("tight variant needs l = k-1")
        if variant == "ell" and not 2 * ell < k:
            raise InvalidArgument("ell variant needs l < k/2")
        if variant == "loose" and (k, ell) != (3, 1):
            raise InvalidArgument("loose variant needs k=3, l=1")
        return variant
    if (k, ell) == (3, 1):
        raise InvalidArgument("k=3, l=1 is covered by two routes; pass variant='ell' or 'loose'")
    if ell == k - 1:
        return "tight"
    if 2 * ell < k:
        return "ell"
    raise UnsupportedRegime(f"no degree threshold known for k={k}, ell={ell}")


@dataclass
class StageReport:
    stage: str
    outcome: str
    certificates: dict[str, Any] = field(default_factory=dict)
    counters: dict[str, Any] = field(default_factory=dict)

    def row(self) -> dict[str, Any]:
        return {"stage": self.stage, "outcome": self.outcome, **self.counters}


@dataclass
class PipelineResult:
    status: str  # "found" or "failed"
    cycle: KLCycle | None
    reports: list[StageReport]
    attempts: int
    failed_stage: str | None = None


@dataclass
class AbsorbingPath:
    path: KLPath
    family: list[tuple[int, ...]]
    registry: dict[Any, list[tuple[int, ...]]]
    graph: dict[int, set[int]] | None = None


def _kind(variant: str) -> str:
    return {"tight": "tight", "ell": "set", "loose": "pair"}[variant]


def _g_for(H: ColoredKGraph, ell: int, variant: str, cfg: PipelineConfig, gamma: float) -> int:
    if cfg.g is not None:
        return cfg.g
    k = H.k
    if variant == "tight":
        return max(1, default_max_len(H, gamma) - (4 * k - 4))
    return 3 * k - 4 * ell


def _absorber_for(H, kind, window, target, ell):
    """Absorber with the given original tuple for the target, or None if it is not a pc absorber."""
    try:
        if kind == "tight":
            A = TightAbsorber(target, tuple(window))
            return A if is_pc_absorber(H, A) else None
        if kind == "pair":
            x, y = target
            for a, b in ((x, y), (y, x)):
                A = PairAbsorber(a, b, tuple(window))
                if is_pc_absorber(H, A):
                    return A
            return None
        S = frozenset(target)
        q = find_set_witness(H, window, S, ell, pc=True)
        return None if q is None else SetAbsorber(S, tuple(window), q, H.k, ell)
    except (InvalidAbsorber, MissingEdge):
        return None


def build_absorbing_path(
    H: ColoredKGraph,
    ell: int,
    cfg: PipelineConfig,
    variant: str | None = None,
    seed: int | None = None,
) -> AbsorbingPath:
    """Sample a disjoint family of pc absorbers and chain it into one pc path A.

    Targets are all vertices (tight), a seeded sample of (k-l)-sets (ell), or a seeded sample
    of edges of the absorbable graph (loose). The registry lists, for each target outside A,
    the family members that absorb it.
    """
    k = H.k
    variant = resolve_variant(k, ell, variant)
    kind = _kind(variant)
    seed = cfg.seed if seed is None else seed
    rng = random.Random(derive_seed(seed, "targets"))
    vs = sorted(H.vertices)
    n = len(vs)
    G = None
    if variant == "tight":
        targets: list[Any] = vs
    elif variant == "ell":
        pool = [frozenset(c) for c in combinations(vs, k - ell)]
        targets = sorted(rng.sample(pool, min(cfg.family_targets, len(pool))), key=sorted)
    else:
        G = build_absorbable_graph(H, cfg.absorbable_threshold, cfg.search_nodes)
        pairs = sorted((x, y) for x in G for y in G[x] if x < y)
        if not pairs:
            raise StagedFailure("absorbable graph has no edges", stage="absorbing-path")
        targets = sorted(rng.sample(pairs, min(cfg.family_targets, len(pairs))))
    pool: dict[tuple[int, ...], None] = {}
    target_sets = []
    for i, T in enumerate(targets):
        found = enumerate_absorbers(
            H, T, kind, pc_only=True, cap=cfg.absorber_cap,
            seed=derive_seed(seed, "enum", i), max_nodes=cfg.search_nodes,
        )
        pool.update((A.original.vertices, None) for A in found)
        target_sets.append(frozenset([T]) if isinstance(T, int) else frozenset(T))
    # a candidate found for one target often absorbs others too, so hits are recounted per target
    families = [
        [tup for tup in pool if not Ts & set(tup) and _absorber_for(H, kind, tup, T, ell) is not None]
        for T, Ts in zip(targets, target_sets)
    ]
    if not any(families):
        raise StagedFailure("no pc absorbers found for any target", stage="absorbing-path")
    t = 4 * k - 4 if variant == "tight" else 3 * k - 2 * ell
    spec = FamilySpec(
        t, cfg.alpha, families, retries=cfg.sampling_retries,
        min_hits=cfg.family_floor, targets=target_sets,
    )
    try:
        fam = sample_absorber_family(n, spec, derive_seed(seed, "family"))
    except SamplingFailure as exc:
        raise StagedFailure(f"absorber family sampling failed: {exc}", stage="absorbing-path") from exc
    F = fam.F
    paths = [KLPath(k, ell, tup) for tup in F]
    used_F = set().union(*map(set, F))
    gamma = cfg.gamma if cfg.gamma is not None else _gamma(H, ell, variant)
    g = _g_for(H, ell, variant, cfg, gamma)
    res = connect_many(H, paths, H.vertices - used_F, variant, g, seed=derive_seed(seed, "chain"))
    A = res.result
    registry: dict[Any, list[tuple[int, ...]]] = {}
    for T, Ts in zip(targets, target_sets):
        registry[T] = [tup for tup in F if not Ts & set(tup) and _absorber_for(H, kind, tup, T, ell) is not None]
    return AbsorbingPath(A, F, registry, G)


def _gamma(H: ColoredKGraph, ell: int, variant: str) -> float:
    rep = check_hypotheses(H, ell)
    if variant == "ell" and rep.gamma_codegree is not None:
        return rep.gamma_codegree
    return rep.gamma_margin


def _aligned_starts(vs: list[int], s: int, preferred: list[tuple[int, ...]], rescan: bool) -> list[int]:
    n = len(vs)
    pos = {v: i for i, v in enumerate(vs)}
    out = []
    for tup in preferred:
        i = pos.get(tup[0])
        if i is None or i % s:
            continue
        if all(vs[(i + j) % n] == tup[j] for j in range(len(tup))):
            out.append(i)
    if rescan:
        seen = set(out)
        out.extend(i for i in range(0, n, s) if i not in seen)
    return out


def absorb_into_cycle(
    H: ColoredKGraph,
    C: KLCycle,
    target,
    kind: str,
    preferred: list[tuple[int, ...]] = (),
    rescan: bool = True,
) -> KLCycle | None:
    """Absorb the target into C through an aligned window that is a pc absorber for it.

    Registered family members are tried first; with ``rescan`` every aligned window of the
    cycle is tried after them. Coloring conflicts move on to the next window.
    """
    k, ell = C.k, C.ell
    s = k - ell
    vs = list(C.vertices)
    n = len(vs)
    t = 4 * k - 4 if kind == "tight" else 3 * k - 2 * ell
    if n < t:
        return None
    for i in _aligned_starts(vs, s, list(preferred), rescan):
        rot = vs[i:] + vs[:i]
        A = _absorber_for(H, kind, rot[:t], target, ell)
        if A is None:
            continue
        # the non-wrapping windows form a path; the tail closes it back into a cycle
        L = s * ((n - k) // s) + k
        try:
            P = absorb(H, KLPath(k, ell, tuple(rot[:L])), A, 0)
        except (ColoringConflict, PlacementError, InvalidAbsorber):
            continue
        new = KLCycle(k, ell, P.vertices + tuple(rot[L:]))
        try:
            if not new.is_valid or not is_properly_colored(H, new):
                continue
        except MissingEdge:
            continue
        return new
    return None


def find_pc_hamilton_absorbing(
    H: ColoredKGraph,
    ell: int,
    cfg: PipelineConfig | None = None,
    variant: str | None = None,
) -> PipelineResult:
    """Run the absorbing pipeline, restarting with derived seeds up to ``cfg.retries`` times."""
    cfg = cfg or PipelineConfig()
    k, n = H.k, len(H.vertices)
    if not 1 <= ell <= k - 1:
        raise InvalidArgument(f"ell must be in [1, {k - 1}]")
    variant = resolve_variant(k, ell, variant)
    if n % (k - ell):
        raise InvalidArgument(f"{k - ell} does not divide n={n}")
    last: PipelineResult | None = None
    for attempt in range(cfg.retries):
        res = _attempt(H, ell, cfg, variant, derive_seed(cfg.seed, "attempt", attempt))
        res.attempts = attempt + 1
        if res.status == "found":
            return res
        last = res
    return last


def _fail(reports, stage, msg, **counters) -> PipelineResult:
    reports.append(StageReport(stage, "failed", {"error": msg}, counters))
    return PipelineResult("failed", None, reports, 0, stage)


def _attempt(H: ColoredKGraph, ell: int, cfg: PipelineConfig, variant: str, seed: int) -> PipelineResult:
    k, n = H.k, len(H.vertices)
    s = k - ell
    kind = _kind(variant)
    reports: list[StageReport] = []
    rep = check_hypotheses(H, ell)
    gamma = cfg.gamma if cfg.gamma is not None else _gamma(H, ell, variant)
    lam, rho, delta = cfg.lam, cfg.rho, cfg.delta
    g = _g_for(H, ell, variant, cfg, gamma)
    if cfg.asymptotic_constants:
        pp = asymptotic_parameters(k, ell, max(gamma, 1e-9), variant)
        lam, rho, delta = pp["lam"], pp["rho"], pp["delta"]
        g = max(1, int(pp["g"]))
    reports.append(StageReport("hypotheses", "ok", {}, {
        "gamma": round(rep.gamma_margin, 6), "c": round(rep.c_margin, 6),
        "divisible": rep.divisibility, "g": g,
    }))

    # (1) absorbing path
    try:
        ab = build_absorbing_path(H, ell, cfg, variant, derive_seed(seed, "absorbing"))
    except StagedFailure as exc:
        return _fail(reports, "absorbing-path", str(exc))
    A = ab.path
    reports.append(StageReport("absorbing-path", "ok", {"A": A, "family": ab.family}, {
        "absorbers": len(ab.family), "|V(A)|": len(A.vertices),
        "registered_targets": sum(1 for v in ab.registry.values() if v),
        "targets_on_A": sum(1 for T in ab.registry if set([T] if isinstance(T, int) else T) & set(A.vertices)),
        "targets": len(ab.registry),
    }))

    # (2) reservoir on H - V(A)
    V1 = sorted(H.vertices - set(A.vertices))
    p = rho
    if variant != "tight" and V1:
        p = max(rho, (2 * g + 2) / len(V1))
    p = min(p, 0.9)
    skipped = bool(V1) and p * len(V1) < 1
    if V1 and not skipped:
        spec = ReservoirSpec(p, retries=cfg.sampling_retries)
        if variant == "loose":
            H1 = H.remove_vertices(A.vertices)
            pairs = math.comb(len(V1), 2)
            for v in V1:
                link = [e for e in H1.link((v,))]
                if link and pairs:
                    spec.graphs.append((link, len(link) / pairs))
            if ab.graph is not None:
                for v in V1:
                    U = frozenset(ab.graph[v]) & frozenset(V1)
                    if U:
                        spec.subsets.append((U, len(U) / len(V1)))
        try:
            R = set(sample_reservoir(V1, spec, derive_seed(seed, "reservoir")).R)
        except SamplingFailure as exc:
            return _fail(reports, "reservoir", str(exc))
    else:
        R = set()
    # below one expected vertex the size condition cannot hold for any R, so the reservoir stays empty
    reports.append(StageReport("reservoir", "skipped" if skipped else "ok", {"R": sorted(R)}, {"|R|": len(R), "p": round(p, 6)}))

    # (3) cover of H - V(A) - R
    H2 = H.remove_vertices(set(A.vertices) | R)
    q = cfg.q if cfg.q is not None else n
    cover = greedy_path_cover(H2, ell, delta, q, derive_seed(seed, "cover"), cfg.min_path_edges)
    reports.append(StageReport("cover", "shortfall" if cover.shortfall else "ok", {"paths": cover.paths}, {
        "paths": len(cover.paths), "uncovered": len(cover.uncovered),
    }))

    # (4) connect A and the cover into one cycle through R
    paths = [A] + list(cover.paths)
    dropped = 0
    while True:
        try:
            res = connect_many(H, paths, R, variant, g, close_cycle=True, seed=derive_seed(seed, "connect"))
            break
        except StagedFailure as exc:
            i, j = exc.details.get("pair", (0, 0))
            victim = j if j > 0 else len(paths) - 1
            if victim == 0 or len(paths) == 1:
                return _fail(reports, "connect", str(exc), dropped=dropped)
            paths.pop(victim)
            dropped += 1
    C = res.result
    conns = len(paths)
    if len(res.used_Q) > conns * g:
        raise InternalError("connections used more reservoir vertices than allowed")
    reports.append(StageReport("connect", "ok", {"cycle": C}, {
        "connections": conns, "used_R": len(res.used_Q), "dropped_paths": dropped,
    }))

    # (5) absorb the leftover
    U = sorted(H.vertices - set(C.vertices))
    if len(U) % s:
        raise InternalError(f"leftover of size {len(U)} is not divisible by {s}")
    counters: dict[str, Any] = {"|U|": len(U), "within_capacity": len(U) <= lam * n}
    if variant == "tight":
        chunks: list[Any] = U
    elif variant == "ell":
        chunks = [frozenset(U[i : i + s]) for i in range(0, len(U), s)]
    else:
        G = ab.graph or {}
        slack = len(R) / 100
        counters["matching_guard_ok"] = len(R - set(U)) <= slack and len(set(U) - R) <= slack
        M = perfect_matching(G, U)
        if M is None:
            return _fail(reports, "absorb", "leftover has no perfect matching in the absorbable graph", **counters)
        chunks = M
    for T in chunks:
        if kind == "tight":
            preferred = ab.registry.get(T, [])
        elif kind == "pair":
            preferred = ab.registry.get(tuple(sorted(T)), []) or ab.family
        else:
            preferred = ab.family
        C2 = absorb_into_cycle(H, C, T, kind, preferred, cfg.rescan)
        if C2 is None:
            label = T if isinstance(T, int) else sorted(T)
            return _fail(reports, "absorb", f"no absorber accepted target {label}", **counters)
        C = C2
    reports.append(StageReport("absorb", "ok", {}, counters))

    # (6) final gate
    if not (is_hamilton(H, C) and is_properly_colored(H, C)):
        raise InternalError("pipeline produced a cycle that fails validation")
    reports.append(StageReport("validate", "ok", {"cycle": C}, {"n": len(C.vertices)}))
    return PipelineResult("found", C, reports, 0)


def report_rows(result: PipelineResult) -> list[dict[str, Any]]:
    return [r.row() for r in result.reports]
