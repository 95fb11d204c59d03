"""Exhaustive backtracking search for properly colored Hamilton cycles and short paths.

Used as the correctness oracle for the constructive pipeline. Budget exhaustion is its own
outcome and is never reported as "none".
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from .errors import InvalidArgument
from .hypergraph import ColoredKGraph
from .paths import KLCycle, KLPath, cycle_edges, is_hamilton, is_properly_colored

FOUND, NONE, BUDGET = "found", "none", "budget-exhausted"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10_000_000
    time_limit: float = 60.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.time_limit <= 0:
            raise InvalidArgument("budget limits must be positive")


@dataclass
class ExactResult:
    status: str
    cycle: KLCycle | None = None
    nodes: int = 0


@dataclass
class CountResult:
    status: str  # "exact" or BUDGET; on BUDGET the count is a lower bound only
    count: int
    nodes: int = 0

    @property
    def usable(self) -> bool:
        return self.status == "exact"


@dataclass
class PathResult:
    status: str
    path: KLPath | None = None
    nodes: int = 0


class _Exhausted(Exception):
    pass


class _Ticker:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.t0 = time.monotonic()

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _Exhausted
        if self.nodes & 1023 == 0 and time.monotonic() - self.t0 > self.budget.time_limit:
            raise _Exhausted


def canonical_cycle(vertices: Sequence[int], k: int, ell: int) -> tuple[int, ...]:
    """Lexicographically smallest sequence describing the same cycle.

    The symmetries are rotations by multiples of k-l and the reflection that keeps windows aligned.
    Candidates are ranked first by the position of the smallest vertex, which always lands in
    [0, k-l) for the winner; the exhaustive search only generates such sequences.
    """
    n, s = len(vertices), k - ell
    m = min(vertices)
    best = None
    for r in range(0, n, s):
        fwd = tuple(vertices[(i + r) % n] for i in range(n))
        bwd = tuple(vertices[(k - 1 + r - i) % n] for i in range(n))
        for cand in (fwd, bwd):
            key = (cand.index(m), cand)
            if best is None or key < best:
                best = key
    return best[1]


class _CycleSearch:
    """DFS placing vertices one position at a time; edge windows start at phase + j*s."""

    def __init__(self, H: ColoredKGraph, ell: int, budget: SearchBudget):
        self.H, self.k, self.ell = H, H.k, ell
        self.s = H.k - ell
        self.verts = sorted(H.vertices)
        self.n = len(self.verts)
        self.ticker = _Ticker(budget)

    def run(self, on_cycle):
        n, s = self.n, self.s
        if n < 2 * self.k - self.ell:
            return
        m = self.verts[0]
        for phase in range(s):
            self.phase = phase
            seq = [m]
            self.edges: list[tuple[set, int]] = []
            if self._dfs(seq, {m}, on_cycle):
                return

    def _window_ok(self, seq: list[int]) -> bool:
        """Check the window that ends at the last placed position (if any) and the open window."""
        H, k, s, t = self.H, self.k, self.s, len(seq) - 1
        a = t - k + 1
        if a >= self.phase and (a - self.phase) % s == 0:
            e = seq[a:]
            c = H.phi(e)
            if c is None:
                return False
            es = set(e)
            for f, fc in self.edges[-((k + s - 1) // s) :]:
                if fc == c and not es.isdisjoint(f):
                    return False
            self.edges.append((es, c))
            return True
        # open window: latest start <= t that has not ended yet
        off = (t - self.phase) % s if t >= self.phase else None
        if off is not None:
            start = t - off
            part = seq[start:]
            if 0 < len(part) < k and H.degree(part) == 0:
                return False
        return True

    def _dfs(self, seq, used, on_cycle) -> bool:
        self.ticker.tick()
        if len(seq) == self.n:
            # rotate so window starts sit at multiples of s and seq[0] lands in [0, s)
            p = (-self.phase) % self.s
            vs = tuple(seq[self.n - p :] + seq[: self.n - p])
            C = KLCycle(self.k, self.ell, vs)
            if is_hamilton(self.H, C) and is_properly_colored(self.H, C):
                return on_cycle(C)
            return False
        for v in self.verts:
            if v in used:
                continue
            seq.append(v)
            before = len(self.edges)
            if self._window_ok(seq):
                used.add(v)
                if self._dfs(seq, used, on_cycle):
                    return True
                used.discard(v)
            del self.edges[before:]
            seq.pop()
        return False


def _check_div(H: ColoredKGraph, ell: int) -> None:
    if not 1 <= ell <= H.k - 1:
        raise InvalidArgument(f"ell must be in [1, {H.k - 1}]")
    if len(H.vertices) % (H.k - ell):
        raise InvalidArgument(f"{H.k - ell} does not divide n={len(H.vertices)}")


def find_pc_hamilton_exact(H: ColoredKGraph, ell: int, budget: SearchBudget | None = None) -> ExactResult:
    _check_div(H, ell)
    srch = _CycleSearch(H, ell, budget or SearchBudget())
    found: list[KLCycle] = []

    def take(C):
        found.append(C)
        return True

    try:
        srch.run(take)
    except _Exhausted:
        return ExactResult(BUDGET, None, srch.ticker.nodes)
    if found:
        return ExactResult(FOUND, found[0], srch.ticker.nodes)
    return ExactResult(NONE, None, srch.ticker.nodes)


def count_pc_hamilton(H: ColoredKGraph, ell: int, budget: SearchBudget | None = None) -> CountResult:
    """Count pc Hamilton (k, l)-cycles up to rotation and reflection."""
    _check_div(H, ell)
    srch = _CycleSearch(H, ell, budget or SearchBudget())
    count = 0

    def take(C):
        nonlocal count
        if canonical_cycle(C.vertices, H.k, ell) == C.vertices:
            count += 1
        return False

    try:
        srch.run(take)
    except _Exhausted:
        return CountResult(BUDGET, count, srch.ticker.nodes)
    return CountResult("exact", count, srch.ticker.nodes)


def _orderings(end: Iterable[int]) -> list[tuple[int, ...]]:
    if isinstance(end, (set, frozenset)):
        return sorted(set(permutations(sorted(end))))
    return [tuple(end)]


def find_pc_path_exact(
    H: ColoredKGraph,
    ell: int,
    from_end: Iterable[int],
    to_end: Iterable[int],
    max_vertices: int,
    forbidden: Iterable[int] = (),
    min_vertices: int = 0,
    budget: SearchBudget | None = None,
) -> PathResult:
    """Shortest pc (k, l)-path that starts with ``from_end`` and ends with ``to_end``.

    Ends given as tuples are matched in order; sets match in any order. Lengths are tried
    in increasing order from ``min_vertices`` up to ``max_vertices``.
    """
    k, s = H.k, H.k - ell
    if not 1 <= ell <= k - 1:
        raise InvalidArgument(f"ell must be in [1, {k - 1}]")
    A, B = set(from_end), set(to_end)
    forb = set(forbidden)
    if A & B:
        raise InvalidArgument("from and to ends overlap")
    if (A | B) & forb:
        raise InvalidArgument("ends meet the forbidden set")
    if not (A | B) <= H.vertices:
        raise InvalidArgument("ends contain unknown vertices")
    pool = sorted(H.vertices - A - B - forb)
    ticker = _Ticker(budget or SearchBudget())
    starts, stops = _orderings(from_end), _orderings(to_end)
    lo = max(min_vertices, k, len(A) + len(B))
    try:
        for L in range(lo, max_vertices + 1):
            if (L - ell) % s:
                continue
            inner = L - len(A) - len(B)
            for st in starts:
                for sp in stops:
                    P = _path_dfs(H, ell, list(st), sp, inner, pool, ticker)
                    if P is not None:
                        return PathResult(FOUND, P, ticker.nodes)
    except _Exhausted:
        return PathResult(BUDGET, None, ticker.nodes)
    return PathResult(NONE, None, ticker.nodes)


def _path_dfs(H, ell, start, stop, inner, pool, ticker) -> KLPath | None:
    k, s = H.k, H.k - ell
    target = len(start) + inner

    def prefix_ok(seq) -> bool:
        t = len(seq) - 1
        a = t - k + 1
        if a >= 0 and a % s == 0:
            return H.phi(seq[a:]) is not None
        part = seq[t - t % s :]
        return not (0 < len(part) < k) or H.degree(part) > 0

    def finish(seq) -> KLPath | None:
        P = KLPath(k, ell, tuple(seq) + tuple(stop))
        if not P.is_valid:
            return None
        try:
            return P if is_properly_colored(H, P) else None
        except Exception:
            return None

    def dfs(seq, used):
        ticker.tick()
        if len(seq) == target:
            return finish(seq)
        for v in pool:
            if v in used:
                continue
            seq.append(v)
            if prefix_ok(seq):
                used.add(v)
                r = dfs(seq, used)
                if r is not None:
                    return r
                used.discard(v)
            seq.pop()
        return None

    # the fixed start must itself be a feasible prefix
    for i in range(1, len(start) + 1):
        if not prefix_ok(start[:i]):
            return None
    return dfs(start, set(start))
