"""Path covers: dense k-partite path growth, canonical path growth, greedy global cover, matchings."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .errors import ContradictionFlag, InvalidArgument
from .hypergraph import ColoredKGraph, Edge
from .paths import KLPath, is_properly_colored, path_edges


@dataclass
class GrowResult:
    path: KLPath
    deleted: int
    edges_left: int


def _part_index(parts: Sequence[Iterable[int]]) -> dict[int, int]:
    idx: dict[int, int] = {}
    for i, P in enumerate(parts):
        for v in P:
            if v in idx:
                raise InvalidArgument(f"vertex {v} lies in two parts")
            idx[v] = i
    return idx


def _check_partite(J: ColoredKGraph, idx: dict[int, int]) -> None:
    for e in J.edges:
        if sorted(idx.get(v, -1) for v in e) != list(range(J.k)):
            raise InvalidArgument(f"edge {e} does not meet every part exactly once")


def _prune(edges: set[Edge], k: int, size: int, keys, threshold: float) -> int:
    """Delete all edges through any key set whose degree is positive but below threshold.

    ``keys(e)`` lists the sets of size ``size`` of edge e that are subject to the rule.
    Returns the number of deleted edges.
    """
    deg: Counter = Counter()
    for e in edges:
        deg.update(keys(e))
    deleted = 0
    changed = True
    while changed:
        changed = False
        low = sorted(S for S, d in deg.items() if 0 < d < threshold)
        for S in low:
            if not 0 < deg[S] < threshold:
                continue
            doomed = [e for e in edges if set(S) <= set(e)]
            for e in doomed:
                edges.discard(e)
                deg.subtract(keys(e))
                deleted += 1
            changed = True
    return deleted


def grow_dense_path(
    J: ColoredKGraph,
    parts: Sequence[Iterable[int]],
    d: float,
    m: int | None = None,
    seed: int | None = None,
) -> GrowResult:
    """Long pc tight path in a k-partite colored k-graph with at least d*m^k edges.

    Phase one repeatedly deletes all edges through any (k-1)-set of degree below d*m/k.
    Phase two grows a tight path greedily at the back and then at the front; a new edge must
    avoid the colors of the k-1 path edges it meets. The front end is left non-extendable.
    """
    k = J.k
    parts = [set(P) for P in parts]
    if len(parts) != k:
        raise InvalidArgument(f"need {k} parts")
    idx = _part_index(parts)
    _check_partite(J, idx)
    m = m if m is not None else max(len(P) for P in parts)
    edges = set(J.edges)
    deleted = _prune(edges, k, k - 1, lambda e: combinations(e, k - 1), d * m / k)
    if not edges:
        raise ContradictionFlag("no edges survive the degree preprocessing", deleted=deleted)
    rng = random.Random(seed)
    start = sorted(edges)[0] if seed is None else rng.choice(sorted(edges))
    # order the start edge by part so that parts repeat with period k
    seq = sorted(start, key=lambda v: idx[v])
    seq = _extend_tight(J, edges, seq, rng if seed is not None else None)
    seq = _extend_tight(J, edges, seq[::-1], rng if seed is not None else None)[::-1]
    P = KLPath(k, k - 1, tuple(seq))
    if not is_properly_colored(J, P):
        raise AssertionError("greedy tight path lost proper coloring")
    return GrowResult(P, deleted, len(edges))


def _extend_tight(H: ColoredKGraph, edges: set[Edge] | None, seq: list[int], rng, allowed: set[int] | None = None) -> list[int]:
    """Append vertices while the new last edge exists and avoids the colors of the k-1 edges it meets."""
    k = H.k
    seq = list(seq)
    used = set(seq)
    while True:
        tail = tuple(seq[-(k - 1) :])
        blocked = {H.phi(seq[i : i + k]) for i in range(max(0, len(seq) - 2 * k + 2), len(seq) - k + 1)}
        cands = []
        for (u,) in H.link(tail):
            if u in used or (allowed is not None and u not in allowed):
                continue
            e = tuple(sorted(tail + (u,)))
            if edges is not None and e not in edges:
                continue
            if H.color[e] in blocked:
                continue
            cands.append(u)
        if not cands:
            return seq
        u = rng.choice(cands) if rng is not None else cands[0]
        seq.append(u)
        used.add(u)


def grow_canonical_path(
    J: ColoredKGraph,
    parts: Sequence[Iterable[int]],
    ell: int,
    d: float,
    m: int | None = None,
    seed: int | None = None,
) -> GrowResult:
    """pc canonical (k, l)-path: shared l-sets alternate between the first l and the last l parts.

    Preprocessing deletes edges through outer l-sets whose degree is positive but below
    d*m^(k-l)/2; growth then appends edges whose color differs from the current last edge.
    """
    k = J.k
    if not 1 <= ell or 2 * ell >= k:
        raise InvalidArgument("canonical paths need 1 <= l < k/2")
    parts = [set(P) for P in parts]
    if len(parts) != k:
        raise InvalidArgument(f"need {k} parts")
    idx = _part_index(parts)
    _check_partite(J, idx)
    m = m if m is not None else max(len(P) for P in parts)

    def outer(e):
        lo = tuple(sorted(v for v in e if idx[v] < ell))
        hi = tuple(sorted(v for v in e if idx[v] >= k - ell))
        return [lo, hi]

    edges = set(J.edges)
    deleted = _prune(edges, k, ell, outer, d * m ** (k - ell) / 2)
    if not edges:
        raise ContradictionFlag("no edges survive the degree preprocessing", deleted=deleted)
    rng = random.Random(seed) if seed is not None else None
    start = sorted(edges)[0] if rng is None else rng.choice(sorted(edges))
    lo, hi = outer(start)
    mid = sorted(v for v in start if ell <= idx[v] < k - ell)
    seq = list(lo) + mid + list(hi)
    seq = _extend_canonical(J, edges, seq, ell, idx, rng)
    seq = _extend_canonical(J, edges, seq[::-1], ell, idx, rng)[::-1]
    P = KLPath(k, ell, tuple(seq))
    if not is_properly_colored(J, P):
        raise AssertionError("greedy canonical path lost proper coloring")
    return GrowResult(P, deleted, len(edges))


def _extend_canonical(J, edges, seq, ell, idx, rng):
    k = J.k
    seq = list(seq)
    used = set(seq)
    while True:
        L = tuple(seq[-ell:])
        last_c = J.phi(seq[-k:])
        side_hi = idx[L[0]] >= k - ell
        cands = []
        for e in sorted(edges):
            if not set(L) <= set(e):
                continue
            rest = [v for v in e if v not in L]
            if used.intersection(rest) or J.color[e] == last_c:
                continue
            cands.append(rest)
        if not cands:
            return seq
        rest = rng.choice(cands) if rng is not None else cands[0]
        mid = sorted(v for v in rest if ell <= idx[v] < k - ell)
        far = sorted(v for v in rest if (idx[v] < ell) == side_hi and not ell <= idx[v] < k - ell)
        seq.extend(mid + far)
        used.update(rest)


def is_canonical(P: KLPath, parts: Sequence[Iterable[int]]) -> bool:
    """Every edge window puts its first and last l vertices in outer parts and the rest in middle parts,
    and consecutive shared l-sets alternate between the low and the high outer parts."""
    k, ell = P.k, P.ell
    idx = _part_index(parts)
    vs = P.vertices
    prev_side = None
    for i in range(0, len(vs) - k + 1, k - ell):
        w = vs[i : i + k]
        if sorted(idx.get(v, -1) for v in w) != list(range(k)):
            return False
        if any(not ell <= idx[v] < k - ell for v in w[ell : k - ell]):
            return False
        sides = []
        for block in (w[:ell], w[k - ell :]):
            s = {idx[v] < ell for v in block}
            if len(s) != 1 or any(ell <= idx[v] < k - ell for v in block):
                return False
            sides.append(s.pop())
        if sides[0] == sides[1]:
            return False
        if prev_side is not None and sides[0] != prev_side:
            return False
        prev_side = sides[1]
    return True


# ---------------------------------------------------------------------------


@dataclass
class CoverResult:
    paths: list[KLPath]
    uncovered: set[int]
    target: float
    shortfall: bool = field(default=False)


def _grow_free_path(H: ColoredKGraph, ell: int, start: int, free: set[int], rng) -> KLPath | None:
    k = H.k
    firsts = [e for e in H.link((start,)) if free.issuperset(e)]
    if not firsts:
        return None
    rest = list(rng.choice(firsts))
    rng.shuffle(rest)
    seq = [start] + rest
    if ell == k - 1:
        seq = _extend_tight(H, None, seq, rng, free)
        seq = _extend_tight(H, None, seq[::-1], rng, free)[::-1]
    else:
        seq = _extend_ell(H, ell, seq, rng, free)
        seq = _extend_ell(H, ell, seq[::-1], rng, free)[::-1]
    return KLPath(k, ell, tuple(seq))


def _extend_ell(H: ColoredKGraph, ell: int, seq: list[int], rng, free: set[int]) -> list[int]:
    k = H.k
    seq = list(seq)
    used = set(seq)
    while True:
        L = tuple(seq[-ell:])
        last_c = H.phi(seq[-k:])
        cands = [r for r in H.link(L) if free.issuperset(r) and used.isdisjoint(r) and H.phi(L + r) != last_c]
        if not cands:
            return seq
        r = list(rng.choice(cands))
        rng.shuffle(r)
        seq.extend(r)
        used.update(r)


def greedy_path_cover(
    H: ColoredKGraph,
    ell: int,
    delta: float,
    q: int,
    seed: int | None = None,
    min_edges: int = 3,
) -> CoverResult:
    """Disjoint pc (k, l)-paths grown greedily from random uncovered starts.

    Stops once at most delta*n vertices are uncovered, q paths exist, or no start vertex yields
    a path with at least ``min_edges`` edges. ``shortfall`` is set when the target was missed.
    """
    k = H.k
    if not 1 <= ell <= k - 1:
        raise InvalidArgument(f"ell must be in [1, {k - 1}]")
    rng = random.Random(seed)
    n = len(H.vertices)
    free = set(H.vertices)
    paths: list[KLPath] = []
    target = delta * n
    starts = sorted(free)
    rng.shuffle(starts)
    tried: set[int] = set()
    while len(free) > target and len(paths) < q:
        cand = [v for v in starts if v in free and v not in tried]
        if not cand:
            break
        v = cand[0]
        tried.add(v)
        P = _grow_free_path(H, ell, v, free, rng)
        if P is None or P.num_edges < min_edges:
            continue
        paths.append(P)
        free -= set(P.vertices)
    return CoverResult(paths, free, target, shortfall=len(free) > target)


def perfect_matching(G: dict[int, set[int]], U: Iterable[int]) -> list[tuple[int, int]] | None:
    """Perfect matching of G[U] as sorted pairs, or None. Maximum matching via networkx."""
    U = set(U)
    if len(U) % 2:
        raise InvalidArgument("|U| must be even")
    g = nx.Graph()
    g.add_nodes_from(U)
    g.add_edges_from((x, y) for x in U for y in G.get(x, ()) if y in U and x != y)
    M = nx.max_weight_matching(g, maxcardinality=True)
    if 2 * len(M) != len(U):
        return None
    return sorted(tuple(sorted(e)) for e in M)
