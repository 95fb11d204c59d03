"""Short properly colored paths joining prescribed ends, and chaining many paths through a reserved set."""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidArgument, SpliceInvalid, StagedFailure
from .hypergraph import ColoredKGraph, check_hypotheses
from .paths import KLCycle, KLPath, is_properly_colored, path_edges, splice


class DirectedAux:
    """Ordered (2k-1)-tuples whose k windows are edges of H with pairwise distinct colors.

    Never materialized; membership and neighborhoods are computed on demand.
    """

    def __init__(self, H: ColoredKGraph, excluded: Iterable[int] = ()):
        self.H = H
        self.k = H.k
        self.excluded = frozenset(excluded)

    def is_edge(self, tup: Sequence[int]) -> bool:
        k = self.k
        if len(tup) != 2 * k - 1 or len(set(tup)) != len(tup):
            return False
        if self.excluded.intersection(tup):
            return False
        seen = set()
        for i in range(k):
            c = self.H.phi(tup[i : i + k])
            if c is None or c in seen:
                return False
            seen.add(c)
        return True

    def out_neighbors(self, t: Sequence[int], pool: Iterable[int] | None = None) -> list[int]:
        t = tuple(t)
        pool = sorted(self.H.vertices) if pool is None else pool
        return [u for u in pool if u not in t and self.is_edge(t + (u,))]

    def in_neighbors(self, t: Sequence[int], pool: Iterable[int] | None = None) -> list[int]:
        t = tuple(t)
        pool = sorted(self.H.vertices) if pool is None else pool
        return [u for u in pool if u not in t and self.is_edge((u,) + t)]


@dataclass(frozen=True)
class AuxDegrees:
    d_plus: int
    d_minus: int

    @property
    def d_pm(self) -> int:
        return min(self.d_plus, self.d_minus)

    @property
    def extendable(self) -> bool:
        return self.d_plus > 0 or self.d_minus > 0


def aux_degrees(aux: DirectedAux, t: Sequence[int]) -> AuxDegrees:
    if len(t) != 2 * aux.k - 2:
        raise InvalidArgument(f"expected a {2 * aux.k - 2}-tuple")
    return AuxDegrees(len(aux.out_neighbors(t)), len(aux.in_neighbors(t)))


def default_max_len(H: ColoredKGraph, gamma: float | None = None) -> int:
    """Connecting-length bound 8(2k-1)/gamma^2, floored at 4k-3 and capped at n."""
    k, n = H.k, len(H.vertices)
    if gamma is None:
        gamma = check_hypotheses(H, k - 1).gamma_margin
    bound = n if gamma <= 0 else math.floor(8 * (2 * k - 1) / gamma**2)
    return max(4 * k - 3, min(bound, n))


def _tight_joinable(aux: DirectedAux, seq: Sequence[int]) -> bool:
    w = 2 * aux.k - 1
    return all(aux.is_edge(seq[i : i + w]) for i in range(len(seq) - w + 1))


def connect_tight(
    H: ColoredKGraph,
    v: Sequence[int],
    w: Sequence[int],
    avoid: Iterable[int] = (),
    max_len: int | None = None,
    node_budget: int = 200_000,
    min_inner: int = 0,
) -> KLPath | None:
    """pc tight path whose first 2k-2 vertices are ``v`` and last 2k-2 are ``w``.

    At least ``min_inner`` vertices are placed between the two ends.

    Breadth-first search over states made of the last 2k-2 vertices. A walk that revisits a
    vertex is discarded and a bounded depth-first search takes over.
    """
    k = H.k
    v, w = tuple(v), tuple(w)
    if len(v) != 2 * k - 2 or len(w) != 2 * k - 2:
        raise InvalidArgument(f"end paths must have {2 * k - 2} vertices")
    if set(v) & set(w):
        raise InvalidArgument("end paths overlap")
    avoid = set(avoid)
    if avoid & (set(v) | set(w)):
        raise InvalidArgument("end paths meet the avoided set")
    if max_len is None:
        max_len = default_max_len(H)
    aux = DirectedAux(H, avoid)
    pool = sorted(H.vertices - avoid - set(v) - set(w))
    max_inner = max_len - (4 * k - 4)
    if max_inner < 0:
        return None

    def done(seq) -> KLPath | None:
        if len(set(seq)) != len(seq):
            return None
        P = KLPath(k, k - 1, tuple(seq))
        return P if is_properly_colored(H, P) else None

    if min_inner == 0 and _tight_joinable(aux, v + w):
        return done(v + w)
    parent: dict[tuple, tuple | None] = {v: None}
    depth = {v: 0}
    dq = deque([v])
    clash = False
    while dq:
        s = dq.popleft()
        if depth[s] >= max_inner:
            continue
        for u in aux.out_neighbors(s, pool):
            t = s[1:] + (u,)
            if t in parent:
                continue
            parent[t] = s
            depth[t] = depth[s] + 1
            if depth[t] >= min_inner and _tight_joinable(aux, t + w):
                inner = []
                x = t
                while x != v:
                    inner.append(x[-1])
                    x = parent[x]
                res = done(v + tuple(reversed(inner)) + w)
                if res is not None:
                    return res
                clash = True
            dq.append(t)
    if not clash:
        return None
    return _tight_dfs(H, aux, v, w, pool, max_inner, node_budget, min_inner)


def _tight_dfs(H, aux, v, w, pool, max_inner, node_budget, min_inner=0) -> KLPath | None:
    k = H.k
    nodes = 0
    for L in range(max(1, min_inner), max_inner + 1):
        seq = list(v)
        used = set(v)

        def dfs() -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > node_budget:
                return False
            if len(seq) - len(v) == L:
                return _tight_joinable(aux, tuple(seq[-(2 * k - 2) :]) + w)
            for u in pool:
                if u in used:
                    continue
                if aux.is_edge(tuple(seq[-(2 * k - 2) :]) + (u,)):
                    seq.append(u)
                    used.add(u)
                    if dfs():
                        return True
                    used.discard(u)
                    seq.pop()
            return False

        if dfs():
            P = KLPath(k, k - 1, tuple(seq) + w)
            if is_properly_colored(H, P):
                return P
    return None


def _ordered(items: list, rng: random.Random | None) -> list:
    if rng is not None:
        rng.shuffle(items)
    return items


def connect_ell(
    H: ColoredKGraph,
    X: Iterable[int],
    Y: Iterable[int],
    c_X: int | None,
    c_Y: int | None,
    avoid: Iterable[int] = (),
    seed: int | None = None,
) -> KLPath | None:
    """3-edge pc (k, l)-path X v1 .. v_{3k-4l} Y for l < k/2.

    The first edge avoids color c_X and the last avoids c_Y. Staged search: an edge X' over X,
    an edge Y' over Y, then a middle edge through l-subsets Z_X of X' - X and Z_Y of Y' - Y.
    """
    k = H.k
    X, Y = tuple(X), tuple(Y)
    ell = len(X)
    if len(Y) != ell or not 1 <= ell or 2 * ell >= k:
        raise InvalidArgument("X and Y must be l-sets with l < k/2")
    if set(X) & set(Y):
        raise InvalidArgument("X and Y overlap")
    avoid = set(avoid)
    if avoid & (set(X) | set(Y)):
        raise InvalidArgument("ends meet the avoided set")
    rng = random.Random(seed) if seed is not None else None
    blocked = avoid | set(X) | set(Y)
    xs = _ordered([r for r in H.link(X) if blocked.isdisjoint(r) and H.phi(X + r) != c_X], rng)
    if not xs:
        return None
    ys = _ordered([r for r in H.link(Y) if blocked.isdisjoint(r) and H.phi(Y + r) != c_Y], rng)
    for rx in xs:
        cx = H.phi(X + rx)
        for ry in ys:
            if not set(rx).isdisjoint(ry):
                continue
            cy = H.phi(Y + ry)
            taken = blocked | set(rx) | set(ry)
            for ZX in combinations(rx, ell):
                for ZY in combinations(ry, ell):
                    Z = ZX + ZY
                    for rest in H.link(Z):
                        if not taken.isdisjoint(rest):
                            continue
                        ct = H.phi(Z + rest)
                        if ct == cx or ct == cy:
                            continue
                        ax = tuple(u for u in rx if u not in ZX)
                        ay = tuple(u for u in ry if u not in ZY)
                        seq = X + ax + ZX + rest + ZY + ay + Y
                        P = KLPath(k, ell, seq)
                        if is_properly_colored(H, P):
                            return P
    return None


def connect_loose(
    H: ColoredKGraph,
    x: int,
    y: int,
    c_x: int | None,
    c_y: int | None,
    avoid: Iterable[int] = (),
    seed: int | None = None,
) -> KLPath | None:
    """Loose path x v1 v2 v3 v4 v5 y with edges x v1 v2, v2 v3 v4, v4 v5 y.

    The first edge avoids color c_x and the last avoids c_y. Staged search: {v4, v5} from the
    link of y, then {v1, v2} from the link of x, then v3 closing the middle edge.
    """
    if H.k != 3:
        raise InvalidArgument("loose connection needs k=3")
    if x == y:
        raise InvalidArgument("x and y must differ")
    avoid = set(avoid)
    if {x, y} & avoid:
        raise InvalidArgument("ends meet the avoided set")
    rng = random.Random(seed) if seed is not None else None
    blocked = avoid | {x, y}
    free = sorted(H.vertices - blocked)
    if len(free) < 5:
        return None
    ylink = []
    for a, b in H.link((y,)):
        if a in blocked or b in blocked or H.phi((a, b, y)) == c_y:
            continue
        ylink.extend([(a, b), (b, a)])  # (v4, v5)
    xlink = []
    for a, b in H.link((x,)):
        if a in blocked or b in blocked or H.phi((x, a, b)) == c_x:
            continue
        xlink.extend([(a, b), (b, a)])  # (v1, v2)
    ylink, xlink = _ordered(ylink, rng), _ordered(xlink, rng)
    for v4, v5 in ylink:
        c3 = H.phi((v4, v5, y))
        for v1, v2 in xlink:
            if {v1, v2} & {v4, v5}:
                continue
            c1 = H.phi((x, v1, v2))
            for (v3,) in H.link((v2, v4)):
                if v3 in blocked or v3 in (v1, v5):
                    continue
                c2 = H.phi((v2, v3, v4))
                if c2 == c1 or c2 == c3:
                    continue
                P = KLPath(3, 1, (x, v1, v2, v3, v4, v5, y))
                if is_properly_colored(H, P):
                    return P
    return None


@dataclass
class ConnectResult:
    result: KLPath | KLCycle
    used_Q: set[int] = field(default_factory=set)


def _edge_color(H: ColoredKGraph, P: KLPath, last: bool) -> int | None:
    es = path_edges(P)
    return H.phi(es[-1] if last else es[0])


def _join(H, kind, left: KLPath, right: KLPath, free: set[int], g: int, seed) -> tuple[int, ...] | None:
    """Inner connector vertices drawn from ``free`` that join the end of left to the start of right."""
    k, ell = left.k, left.ell
    avoid = H.vertices - free - set(left.vertices[-(2 * k - 2) :] if kind == "tight" else left.vertices[-ell:])
    avoid -= set(right.vertices[: 2 * k - 2] if kind == "tight" else right.vertices[:ell])
    if kind == "tight":
        v, w = left.vertices[-(2 * k - 2) :], right.vertices[: 2 * k - 2]
        P = connect_tight(H, v, w, avoid, max_len=g + 4 * k - 4)
        return None if P is None else P.vertices[2 * k - 2 : -(2 * k - 2)]
    cx, cy = _edge_color(H, left, True), _edge_color(H, right, False)
    if kind == "ell":
        P = connect_ell(H, left.vertices[-ell:], right.vertices[:ell], cx, cy, avoid, seed)
    elif kind == "loose":
        P = connect_loose(H, left.vertices[-1], right.vertices[0], cx, cy, avoid, seed)
    else:
        raise InvalidArgument(f"unknown connector {kind!r}")
    return None if P is None else P.vertices[ell:-ell]


def connect_many(
    H: ColoredKGraph,
    paths: Sequence[KLPath],
    Q: Iterable[int],
    connector: str,
    g: int,
    close_cycle: bool = False,
    seed: int | None = None,
) -> ConnectResult:
    """Chain ``paths`` in order through vertices of Q; optionally close the chain into a cycle.

    Each connection uses at most g fresh vertices of Q and avoids the ones already used.
    """
    if not paths:
        raise InvalidArgument("no paths to connect")
    Q = set(Q)
    for P in paths:
        if set(P.vertices) & Q:
            raise InvalidArgument("paths must avoid Q")
    used: set[int] = set()
    acc = paths[0]
    for i in range(1, len(paths)):
        inner = _join(H, connector, acc, paths[i], Q - used, g, seed)
        if inner is None or len(inner) > g:
            raise StagedFailure(f"could not connect paths {i - 1} and {i}", pair=(i - 1, i))
        try:
            acc = splice(acc, inner, paths[i], H)
        except SpliceInvalid as exc:
            raise StagedFailure(f"connection {i - 1}->{i} broke the path: {exc}", pair=(i - 1, i)) from exc
        used |= set(inner)
    if not close_cycle:
        return ConnectResult(acc, used)
    m = len(paths)
    inner = _join(H, connector, acc, acc, Q - used, g, seed) if _closable(acc, connector) else None
    if inner is None or len(inner) > g:
        raise StagedFailure("could not close the cycle", pair=(m - 1, 0))
    C = KLCycle(acc.k, acc.ell, acc.vertices + tuple(inner))
    if not C.is_valid or not is_properly_colored(H, C):
        raise StagedFailure("closing connection broke the cycle", pair=(m - 1, 0))
    used |= set(inner)
    return ConnectResult(C, used)


def _closable(P: KLPath, connector: str) -> bool:
    k, ell = P.k, P.ell
    need = 4 * k - 4 if connector == "tight" else 2 * ell
    return len(P.vertices) >= need
