"""Absorbers: small gadgets that let a path swallow one vertex, a (k-l)-set, or a pair.

Three species:

* ``TightAbsorber``: a (4k-4)-tuple w whose tight path stays a tight path when the target
  is inserted after w[2k-3].
* ``SetAbsorber``: a 3-edge (k, l)-path P plus a 4-edge path Q on V(P) + S with the same
  end-edges and l-ends.
* ``PairAbsorber``: a loose 7-tuple (v1..v7) whose reordering (v1,v3,v2,x,v4,y,v6,v5,v7)
  is again a loose path. It is the k=3, l=1 instance of a set absorber with a fixed shape.

Every species exposes ``original`` and ``expanded`` paths; absorption replaces the first by
the second inside a longer path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterable, Iterator, Sequence

from .errors import ColoringConflict, InvalidAbsorber, InvalidArgument, MissingEdge, PlacementError
from .hypergraph import ColoredKGraph
from .paths import KLPath, is_properly_colored, path_edges

Graph = dict[int, set[int]]


@dataclass(frozen=True)
class TightAbsorber:
    target: int
    w: tuple[int, ...]

    @property
    def k(self) -> int:
        return (len(self.w) + 4) // 4

    @property
    def targets(self) -> frozenset[int]:
        return frozenset([self.target])

    @property
    def original(self) -> KLPath:
        return KLPath(self.k, self.k - 1, self.w)

    @property
    def expanded(self) -> KLPath:
        h = 2 * self.k - 2
        return KLPath(self.k, self.k - 1, self.w[:h] + (self.target,) + self.w[h:])


@dataclass(frozen=True)
class SetAbsorber:
    target: frozenset[int]
    p: tuple[int, ...]
    q: tuple[int, ...]
    k: int
    ell: int

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(self.target)

    @property
    def original(self) -> KLPath:
        return KLPath(self.k, self.ell, self.p)

    @property
    def expanded(self) -> KLPath:
        return KLPath(self.k, self.ell, self.q)


@dataclass(frozen=True)
class PairAbsorber:
    x: int
    y: int
    v: tuple[int, ...]

    k = 3
    ell = 1

    @property
    def targets(self) -> frozenset[int]:
        return frozenset([self.x, self.y])

    @property
    def original(self) -> KLPath:
        return KLPath(3, 1, self.v)

    @property
    def expanded(self) -> KLPath:
        v1, v2, v3, v4, v5, v6, v7 = self.v
        return KLPath(3, 1, (v1, v3, v2, self.x, v4, self.y, v6, v5, v7))


Absorber = TightAbsorber | SetAbsorber | PairAbsorber


def structural_error(H: ColoredKGraph, A: Absorber) -> str | None:
    orig, exp = A.original, A.expanded
    for P in (orig, exp):
        err = P.structural_error()
        if err:
            return err
        missing = [e for e in path_edges(P) if e not in H.color]
        if missing:
            return f"edge {missing[0]} not in hypergraph"
    if A.targets & set(orig.vertices):
        return "targets meet the absorber tuple"
    if set(exp.vertices) != set(orig.vertices) | A.targets:
        return "expanded path has the wrong vertex set"
    if isinstance(A, TightAbsorber) and len(A.w) != 4 * A.k - 4:
        return "tight absorber tuple must have 4k-4 vertices"
    if isinstance(A, SetAbsorber):
        k, ell = A.k, A.ell
        if len(A.target) != k - ell:
            return "target set must have k-l vertices"
        if orig.num_edges != 3 or exp.num_edges != 4:
            return "set absorber needs a 3-edge and a 4-edge path"
        pe, qe = path_edges(orig), path_edges(exp)
        if pe[0] != qe[0] or pe[-1] != qe[-1]:
            return "end-edges differ"
        if set(A.p[:ell]) != set(A.q[:ell]) or set(A.p[-ell:]) != set(A.q[-ell:]):
            return "l-ends differ"
    return None


def is_pc_absorber(H: ColoredKGraph, A: Absorber) -> bool:
    err = structural_error(H, A)
    if err:
        raise InvalidAbsorber(err)
    return is_properly_colored(H, A.original) and is_properly_colored(H, A.expanded)


# ---------------------------------------------------------------------------
# enumeration


class _TupleSearch:
    """Build a tuple slot by slot; each constraint edge is checked as soon as its slots are filled.

    ``groups`` is a list of paths, each a list of edges; an edge is a tuple of slot indices
    (ints) or fixed vertices (``("fix", v)``). Colors are compared only within a group.
    """

    def __init__(self, H, length, groups, pool, pc_only, rng, max_nodes=None):
        self.H, self.length, self.pool, self.pc_only, self.rng = H, length, pool, pc_only, rng
        self.max_nodes = max_nodes
        self.nodes = 0
        self.due: list[list[tuple[int, int, tuple]]] = [[] for _ in range(length)]
        for g, edges in enumerate(groups):
            for j, e in enumerate(edges):
                slots = [s for s in e if isinstance(s, int)]
                self.due[max(slots)].append((g, j, e))
        self.groups = groups

    def _resolve(self, e, tup):
        return [tup[s] if isinstance(s, int) else s[1] for s in e]

    def run(self) -> Iterator[tuple[int, ...]]:
        tup: list[int] = []
        done: dict[tuple[int, int], tuple[set, int]] = {}
        yield from self._dfs(tup, set(), done)

    def _dfs(self, tup, used, done):
        d = len(tup)
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            return
        if d == self.length:
            yield tuple(tup)
            return
        cands = [v for v in self.pool if v not in used]
        if self.rng is not None:
            self.rng.shuffle(cands)
        for v in cands:
            tup.append(v)
            added = []
            ok = True
            for g, j, e in self.due[d]:
                vs = self._resolve(e, tup)
                c = self.H.phi(vs)
                if c is None:
                    ok = False
                    break
                s = set(vs)
                if self.pc_only:
                    for (g2, _), (s2, c2) in done.items():
                        if g2 == g and c2 == c and not s.isdisjoint(s2):
                            ok = False
                            break
                    if not ok:
                        break
                done[(g, j)] = (s, c)
                added.append((g, j))
            if ok:
                used.add(v)
                yield from self._dfs(tup, used, done)
                used.discard(v)
            for key in added:
                del done[key]
            tup.pop()


def _windows(slots: Sequence, k: int, s: int) -> list[tuple]:
    return [tuple(slots[i : i + k]) for i in range(0, len(slots) - k + 1, s)]


def _tight_groups(k: int, v: int):
    w = list(range(4 * k - 4))
    h = 2 * k - 2
    tv = w[:h] + [("fix", v)] + w[h:]
    return [_windows(w, k, 1), _windows(tv, k, 1)]


def _pair_groups(x: int, y: int):
    v1, v2, v3, v4, v5, v6, v7 = range(7)
    orig = [(v1, v2, v3), (v3, v4, v5), (v5, v6, v7)]
    exp = [(v1, v3, v2), (v2, ("fix", x), v4), (v4, ("fix", y), v6), (v6, v5, v7)]
    return [orig, exp]


def find_set_witness(H: ColoredKGraph, p: Sequence[int], S: Iterable[int], ell: int, pc: bool) -> tuple[int, ...] | None:
    """A 4-edge path on V(p) + S with the same end-edges and l-ends as the 3-edge path p."""
    k = H.k
    S = sorted(S)
    E1, E2 = list(p[:k]), list(p[-k:])
    F1, F2 = list(p[:ell]), list(p[-ell:])
    M = sorted((set(p) - set(E1) - set(E2)) | set(S))
    c1, c2 = H.phi(E1), H.phi(E2)
    if c1 is None or c2 is None:
        return None
    rest1 = sorted(set(E1) - set(F1))
    rest2 = sorted(set(E2) - set(F2))
    for I1 in combinations(rest1, ell):
        for I2 in combinations(rest2, ell):
            for B in combinations(M, ell):
                left = [u for u in M if u not in B]
                for A in combinations(left, k - 2 * ell):
                    C = [u for u in left if u not in A]
                    g1 = H.phi(I1 + A + B)
                    if g1 is None or (pc and g1 == c1):
                        continue
                    g2 = H.phi(tuple(B) + tuple(C) + I2)
                    if g2 is None or (pc and (g2 == g1 or g2 == c2)):
                        continue
                    mid1 = [u for u in rest1 if u not in I1]
                    mid2 = [u for u in rest2 if u not in I2]
                    return tuple(F1 + mid1 + list(I1) + list(A) + list(B) + C + list(I2) + mid2 + F2)
    return None


def iter_absorbers(
    H: ColoredKGraph,
    target,
    kind: str | None = None,
    pc_only: bool = True,
    seed: int | None = None,
    max_nodes: int | None = None,
) -> Iterator[Absorber]:
    """Lazily generate absorbers for ``target``.

    ``kind`` is "tight" (target a vertex), "set" (target a (k-l)-set) or "pair" (target (x, y),
    k=3). With a seed, candidate order at every level is shuffled by a seeded RNG; without one
    it is ascending. ``max_nodes`` bounds the search tree; the generator simply stops there.
    """
    k = H.k
    if kind is None:
        kind = "tight" if isinstance(target, int) else "set"
    rng = random.Random(seed) if seed is not None else None
    if kind == "tight":
        v = int(target)
        if v not in H.vertices:
            raise InvalidArgument(f"unknown vertex {v}")
        pool = sorted(H.vertices - {v})
        srch = _TupleSearch(H, 4 * k - 4, _tight_groups(k, v), pool, pc_only, rng, max_nodes)
        for w in srch.run():
            yield TightAbsorber(v, w)
    elif kind == "pair":
        if k != 3:
            raise InvalidArgument("pair absorbers need k=3")
        x, y = target
        if x == y or not {x, y} <= H.vertices:
            raise InvalidArgument("pair targets must be two distinct known vertices")
        pool = sorted(H.vertices - {x, y})
        srch = _TupleSearch(H, 7, _pair_groups(x, y), pool, pc_only, rng, max_nodes)
        for w in srch.run():
            yield PairAbsorber(x, y, w)
    elif kind == "set":
        S = frozenset(target)
        ell = k - len(S)
        if not 1 <= ell or 2 * ell >= k:
            raise InvalidArgument(f"set absorbers need |S| = k-l with l < k/2, got |S|={len(S)}")
        if not S <= H.vertices:
            raise InvalidArgument("unknown vertices in target set")
        pool = sorted(H.vertices - S)
        t = 3 * k - 2 * ell
        groups = [_windows(list(range(t)), k, k - ell)]
        srch = _TupleSearch(H, t, groups, pool, pc_only, rng, max_nodes)
        for p in srch.run():
            q = find_set_witness(H, p, S, ell, pc_only)
            if q is not None:
                yield SetAbsorber(S, p, q, k, ell)
    else:
        raise InvalidArgument(f"unknown absorber kind {kind!r}")


def enumerate_absorbers(
    H: ColoredKGraph,
    target,
    kind: str | None = None,
    pc_only: bool = True,
    cap: int | None = None,
    seed: int | None = None,
    max_nodes: int | None = None,
) -> list[Absorber]:
    out = []
    for A in iter_absorbers(H, target, kind, pc_only, seed, max_nodes):
        out.append(A)
        if cap is not None and len(out) >= cap:
            break
    return out


def count_absorbers(H: ColoredKGraph, target, kind: str | None = None, cap: int | None = None) -> tuple[int, int]:
    """(all absorbers, pc absorbers) for the target, each count stopping at ``cap``.

    Counts stream through the generator, so memory stays flat however many absorbers exist.
    """
    def n_of(pc_only):
        return sum(1 for _ in islice(iter_absorbers(H, target, kind, pc_only), cap))

    return n_of(False), n_of(True)


# ---------------------------------------------------------------------------
# absorption


def absorb(H: ColoredKGraph, path: KLPath, absorber: Absorber, placement: int) -> KLPath:
    """Replace the absorber's original segment at ``placement`` by its expanded segment."""
    orig, exp = absorber.original, absorber.expanded
    if (path.k, path.ell) != (orig.k, orig.ell):
        raise PlacementError("absorber and path have different (k, l)")
    L = len(orig.vertices)
    if path.vertices[placement : placement + L] != orig.vertices:
        raise PlacementError(f"absorber tuple not found at index {placement}")
    if placement % path.stride:
        raise PlacementError(f"index {placement} is not aligned with the edge windows")
    if absorber.targets & set(path.vertices):
        raise PlacementError("targets already lie on the path")
    vs = path.vertices[:placement] + exp.vertices + path.vertices[placement + L :]
    out = KLPath(path.k, path.ell, vs)
    try:
        ok = is_properly_colored(H, out)
    except MissingEdge as exc:
        raise InvalidAbsorber(str(exc)) from exc
    if not ok:
        raise ColoringConflict("absorbed path is not properly colored")
    return out


def locate(path: KLPath, absorber: Absorber) -> int | None:
    """Index of the absorber's original segment inside ``path``, or None."""
    seg = absorber.original.vertices
    try:
        i = path.vertices.index(seg[0])
    except ValueError:
        return None
    return i if path.vertices[i : i + len(seg)] == seg else None


def build_absorbable_graph(H: ColoredKGraph, threshold: int = 1, max_nodes: int | None = None) -> Graph:
    """Graph on V with {x, y} present iff there are at least ``threshold`` pc (x, y)-absorbers.

    Reversing a pair absorber turns an (x, y)-absorber into a (y, x)-absorber, so only
    pairs x < y are searched. With ``max_nodes`` a pair whose search runs out of budget counts
    as not absorbable.
    """
    if H.k != 3:
        raise InvalidArgument("the absorbable graph is defined for k=3")
    vs = sorted(H.vertices)
    G: Graph = {v: set() for v in vs}
    for i, x in enumerate(vs):
        for y in vs[i + 1 :]:
            if threshold <= 0:
                hit = True
            else:
                hit = len(enumerate_absorbers(H, (x, y), "pair", pc_only=True, cap=threshold, max_nodes=max_nodes)) >= threshold
            if hit:
                G[x].add(y)
                G[y].add(x)
    return G
