"""Random reservoirs and disjoint absorber families, each verified by recount before return."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidArgument, SamplingFailure
from .hypergraph import ColoredKGraph
from .rng import make_rng

Pair = tuple[int, int]

# slack for size bounds given as alpha*n, which often land a rounding error past an integer
_EPS = 1e-9


@dataclass
class ReservoirSpec:
    p: float
    subsets: list[tuple[frozenset[int], float]] = field(default_factory=list)
    graphs: list[tuple[list[Pair], float]] = field(default_factory=list)
    retries: int = 64


@dataclass
class ReservoirResult:
    R: frozenset[int]
    attempt: int
    checks: dict[str, bool]


def reservoir_conditions(V: Iterable[int], R: Iterable[int], spec: ReservoirSpec) -> dict[str, bool]:
    """Recount the three reservoir conditions for R from scratch."""
    V, R = set(V), set(R)
    n, r = len(V), len(R)
    eps = n ** (-1 / 3)
    out = {"a": abs(r - spec.p * n) <= spec.p * n ** (2 / 3)}
    out["b"] = all(len(U & R) >= (a - 2 * eps) * r for U, a in spec.subsets)
    pairs_r = math.comb(r, 2)
    out["c"] = all(
        sum(1 for x, y in G if x in R and y in R) >= (b - 3 * eps) * pairs_r for G, b in spec.graphs
    )
    return out


def sample_reservoir(V: Iterable[int], spec: ReservoirSpec, seed: int | None = None) -> ReservoirResult:
    """Include every vertex independently with probability p; retry until all conditions recount true."""
    V = sorted(set(V))
    n = len(V)
    if not 0 < spec.p < 1:
        raise InvalidArgument("p must lie in (0, 1)")
    for U, a in spec.subsets:
        if len(set(U) & set(V)) < a * n - _EPS:
            raise InvalidArgument(f"subset of size {len(U)} is below alpha*n = {a * n}")
    for G, b in spec.graphs:
        if len(G) < b * math.comb(n, 2):
            raise InvalidArgument(f"graph with {len(G)} edges is below beta*C(n,2)")
    fails = {"a": 0, "b": 0, "c": 0}
    sizes = []
    for attempt in range(spec.retries):
        rng = make_rng(seed, "reservoir", attempt)
        R = frozenset(v for v in V if rng.random() < spec.p)
        checks = reservoir_conditions(V, R, spec)
        if all(checks.values()):
            return ReservoirResult(R, attempt, checks)
        sizes.append(len(R))
        for key, ok in checks.items():
            fails[key] += not ok
    raise SamplingFailure(
        f"no reservoir passed after {spec.retries} attempts; failures per condition {fails}",
        failures=fails,
        mean_size=sum(sizes) / len(sizes) if sizes else 0.0,
    )


@dataclass
class FamilySpec:
    t: int
    alpha: float
    families: list[list[tuple[int, ...]]]
    retries: int = 64
    p: float | None = None
    # optional overrides used by the pipeline: a fixed hit floor, and per-family target sets;
    # a family whose target meets V(F) needs no hits since its target already lies on the path
    min_hits: int | None = None
    targets: list[frozenset[int]] | None = None


@dataclass
class FamilyResult:
    F: list[tuple[int, ...]]
    attempt: int
    threshold: int
    p: float
    warnings: list[str] = field(default_factory=list)


def family_threshold(n: int, t: int, alpha: float) -> int:
    """Required hits per family, floored at one so the condition is never vacuous."""
    return max(1, math.ceil(alpha * alpha * t * t * n / 4 - _EPS))


def family_conditions(n: int, spec: FamilySpec, F: Sequence[tuple[int, ...]]) -> dict[str, bool]:
    seen: set[int] = set()
    disjoint = True
    for tup in F:
        for v in tup:
            if v in seen:
                disjoint = False
            seen.add(v)
    union = set().union(*map(set, spec.families)) if spec.families else set()
    need = spec.min_hits if spec.min_hits is not None else family_threshold(n, spec.t, spec.alpha)
    Fs = set(F)
    targets = spec.targets if spec.targets is not None else [frozenset()] * len(spec.families)
    return {
        "disjoint": disjoint,
        "size": len(F) <= spec.alpha * n + _EPS,
        "subset": Fs <= union,
        "hits": all(len(Fs & set(A)) >= need for A, T in zip(spec.families, targets) if seen.isdisjoint(T)),
    }


def sample_absorber_family(n: int, spec: FamilySpec, seed: int | None = None) -> FamilyResult:
    """Bernoulli-sample candidate tuples, then drop every tuple meeting an earlier survivor.

    The inclusion probability defaults to alpha*n/(4N) for N candidate tuples. When the
    candidates are all t-tuples of [n] this is alpha*n^(1-t)/4; for explicit lists it keeps
    the expected sample size at alpha*n/4.
    """
    t, alpha = spec.t, spec.alpha
    union = sorted(set().union(*map(set, spec.families))) if spec.families else []
    if any(len(tup) != t or len(set(tup)) != t for tup in union):
        raise InvalidArgument(f"family members must be t-tuples of distinct vertices (t={t})")
    N = len(union)
    p = spec.p if spec.p is not None else (min(1.0, alpha * n / (4 * N)) if N else 0.0)
    warns = []
    for i, A in enumerate(spec.families):
        if len(set(A)) < 4 * alpha * t * t * n**t:
            warns.append(f"family {i} has {len(set(A))} members, below 4*alpha*t^2*n^t")
    need = spec.min_hits if spec.min_hits is not None else family_threshold(n, t, alpha)
    fails = {"disjoint": 0, "size": 0, "subset": 0, "hits": 0}
    for attempt in range(spec.retries):
        rng = make_rng(seed, "family", attempt)
        picked = [tup for tup in union if rng.random() < p]
        rng.shuffle(picked)
        used: set[int] = set()
        F = []
        for tup in picked:
            if used.isdisjoint(tup):
                F.append(tup)
                used.update(tup)
        checks = family_conditions(n, spec, F)
        if all(checks.values()):
            return FamilyResult(F, attempt, need, p, warns)
        for key, ok in checks.items():
            fails[key] += not ok
    raise SamplingFailure(
        f"no family passed after {spec.retries} attempts; failures per condition {fails}",
        failures=fails,
    )


# ---------------------------------------------------------------------------
# Monte Carlo reservoir validation


@dataclass
class ReservoirReport:
    variant: str
    trials: int
    successes: int
    matching_trials: int = 0
    matching_successes: int = 0

    @property
    def success_fraction(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def matching_fraction(self) -> float:
        return self.matching_successes / self.matching_trials if self.matching_trials else 1.0


def _random_tight_end(H: ColoredKGraph, pool: list[int], rng, tries: int = 200) -> tuple[int, ...] | None:
    from .paths import KLPath, is_properly_colored

    k = H.k
    if len(pool) < 2 * k - 2:
        return None
    for _ in range(tries):
        t = tuple(rng.sample(pool, 2 * k - 2))
        P = KLPath(k, k - 1, t)
        if all(e in H.color for e in _windows(t, k)) and is_properly_colored(H, P):
            return t
    return None


def _windows(t, k):
    return [tuple(sorted(t[i : i + k])) for i in range(len(t) - k + 1)]


def validate_reservoir(
    H: ColoredKGraph,
    R: Iterable[int],
    variant: str,
    trials: int = 50,
    seed: int | None = None,
    G: dict[int, set[int]] | None = None,
    max_len: int | None = None,
    ell: int | None = None,
) -> ReservoirReport:
    """Estimate how often random end pairs can be joined through R minus a small random R'.

    ``variant`` is "tight", "ell" or "loose". For "loose" the minimum-degree half of the
    matching condition is also sampled on sets U close to R, using the graph G
    (complete when omitted). For "ell" the end size defaults to the largest l below k/2.
    """
    from .connecting import connect_ell, connect_loose, connect_tight

    R = sorted(set(R))
    k = H.k
    outside = sorted(H.vertices - set(R))
    colors = H.colors or [1]
    ok = 0
    for trial in range(trials):
        rng = make_rng(seed, "validate", variant, trial)
        Rp = set(rng.sample(R, rng.randint(0, len(R) // 100))) if R else set()
        free = set(R) - Rp
        if variant == "tight":
            v = _random_tight_end(H, outside, rng)
            rest = [u for u in outside if v is None or u not in v]
            w = _random_tight_end(H, rest, rng)
            if v is None or w is None:
                continue
            avoid = H.vertices - free - set(v) - set(w)
            # a direct join does not use the reservoir, so at least one inner vertex is required
            P = connect_tight(H, v, w, avoid, max_len=max_len or (4 * k - 4 + len(free)), min_inner=1)
        elif variant in ("ell", "loose"):
            if variant == "loose":
                ell = 1
            elif ell is None:
                ell = max(1, (k - 1) // 2)
            if len(outside) < 2 * ell:
                continue
            ends = rng.sample(outside, 2 * ell)
            X, Y = tuple(ends[:ell]), tuple(ends[ell:])
            cx, cy = rng.choice(colors), rng.choice(colors)
            avoid = H.vertices - free - set(X) - set(Y)
            if variant == "loose":
                P = connect_loose(H, X[0], Y[0], cx, cy, avoid)
            else:
                P = connect_ell(H, X, Y, cx, cy, avoid)
        else:
            raise InvalidArgument(f"unknown variant {variant!r}")
        ok += P is not None
    rep = ReservoirReport(variant, trials, ok)
    if variant == "loose":
        vs = sorted(H.vertices)
        if G is None:
            G = {v: set(vs) - {v} for v in vs}
        for trial in range(trials):
            rng = make_rng(seed, "matching", trial)
            U = _qualifying_set(R, outside, rng)
            if U is None:
                continue
            rep.matching_trials += 1
            rep.matching_successes += all(2 * len(G.get(u, set()) & U) >= len(U) for u in U)
    return rep


def _qualifying_set(R: list[int], outside: list[int], rng) -> set[int] | None:
    """Random even U with |R - U| and |U - R| both at most |R|/100."""
    slack = len(R) // 100
    drop = set(rng.sample(R, rng.randint(0, min(slack, len(R)))))
    add = set(rng.sample(outside, rng.randint(0, min(slack, len(outside)))))
    U = (set(R) - drop) | add
    if len(U) % 2:
        if drop:
            U.add(next(iter(sorted(drop))))
        elif add:
            U.discard(next(iter(sorted(add))))
        elif U:
            U.discard(min(U))
    return U if U else None
