"""Seeded instance generators: complete hosts, Dirac-type hosts, and loose-regime hosts."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .errors import Infeasible, InternalError, InvalidArgument
from .hypergraph import ColoredKGraph, Edge, HypothesisReport, check_hypotheses
from .rng import make_rng

COLORINGS = ("rainbow", "random_bounded", "monochromatic", "adversarial_link")


@dataclass(frozen=True)
class Coloring:
    """A coloring scheme.

    ``param`` is the per-color degree target for random_bounded and the special vertex for
    adversarial_link. ``s`` picks which s-degree random_bounded keeps small (default k-1).
    """

    kind: str = "rainbow"
    param: int | None = None
    s: int | None = None

    def __post_init__(self):
        if self.kind not in COLORINGS:
            raise InvalidArgument(f"unknown coloring {self.kind!r}; expected one of {COLORINGS}")
        if self.kind in ("random_bounded", "adversarial_link") and self.param is None:
            raise InvalidArgument(f"{self.kind} needs a parameter")

    def __str__(self) -> str:
        out = self.kind
        if self.param is not None:
            out += f":{self.param}"
        if self.s is not None:
            out += f":{self.s}"
        return out


def parse_coloring(text: str | Coloring) -> Coloring:
    """Parse ``rainbow``, ``monochromatic``, ``random_bounded:T[:s]`` or ``adversarial_link:v``."""
    if isinstance(text, Coloring):
        return text
    kind, *rest = text.strip().split(":")
    try:
        nums = [int(x) for x in rest]
    except ValueError as exc:
        raise InvalidArgument(f"bad coloring parameter in {text!r}") from exc
    if len(nums) > 2:
        raise InvalidArgument(f"too many parameters in {text!r}")
    return Coloring(kind, *nums)


@dataclass
class Instance:
    H: ColoredKGraph
    report: HypothesisReport | None
    notes: list[str] = field(default_factory=list)
    adversarial: bool = False
    num_colors: int = 0


def _random_bounded(edges: list[Edge], k: int, target: int, s: int, rng) -> dict[Edge, int]:
    # random greedy: each edge takes a random color whose s-degree counters stay within target,
    # opening a new color when none fits
    if target < 1:
        raise Infeasible("random_bounded target must allow at least one edge per color per s-set")
    if not 1 <= s <= k - 1:
        raise InvalidArgument(f"s must be in [1, {k - 1}]")
    order = list(edges)
    rng.shuffle(order)
    base = Counter(S for e in edges for S in combinations(e, s))
    m = max(1, math.ceil(max(base.values(), default=0) / target))
    load: list[Counter] = [Counter() for _ in range(m)]
    out: dict[Edge, int] = {}
    for e in order:
        subs = list(combinations(e, s))
        ok = [i for i in range(len(load)) if all(load[i][S] < target for S in subs)]
        if not ok:
            load.append(Counter())
            ok = [len(load) - 1]
        i = rng.choice(ok)
        for S in subs:
            load[i][S] += 1
        out[e] = i + 1
    return out


def color_edges(n: int, k: int, edges: list[Edge], coloring: Coloring | str, seed: int | None) -> tuple[ColoredKGraph, bool]:
    """Color the given edges. Returns the colored graph and whether the scheme is adversarial."""
    coloring = parse_coloring(coloring)
    edges = sorted(edges)
    if coloring.kind == "rainbow":
        mapping = {e: i + 1 for i, e in enumerate(edges)}
    elif coloring.kind == "monochromatic":
        mapping = {e: 1 for e in edges}
    elif coloring.kind == "adversarial_link":
        v = coloring.param
        if not 0 <= v < n:
            raise InvalidArgument(f"vertex {v} out of range")
        mapping, nxt = {}, 2
        for e in edges:
            if v in e:
                mapping[e] = 1
            else:
                mapping[e] = nxt
                nxt += 1
    else:
        s = coloring.s if coloring.s is not None else k - 1
        rng = make_rng(seed, "coloring")
        mapping = _random_bounded(edges, k, coloring.param, s, rng)
        H = ColoredKGraph(n, k, mapping)
        if H.max_s_degree_per_color(s) > coloring.param:
            raise InternalError("random_bounded coloring failed its own audit")
        return H, False
    return ColoredKGraph(n, k, mapping), coloring.kind in ("monochromatic", "adversarial_link")


def gen_complete(n: int, k: int, coloring: Coloring | str = "rainbow", seed: int | None = None) -> Instance:
    if n < k or k < 2:
        raise InvalidArgument("need n >= k >= 2")
    H, adv = color_edges(n, k, list(combinations(range(n), k)), coloring, seed)
    return Instance(H, _report(H, k - 1), [], adv, len(set(H.color.values())))


def _report(H: ColoredKGraph, ell: int) -> HypothesisReport | None:
    try:
        return check_hypotheses(H, ell)
    except Exception:
        return None


def _remove(edges: list[Edge], candidates: list[Edge], keys, floor: int) -> set[Edge]:
    """Delete candidates one by one while every counted key keeps at least ``floor``."""
    live = Counter(S for e in edges for S in keys(e))
    kept = set(edges)
    for e in candidates:
        ks = keys(e)
        if all(live[S] > floor for S in ks):
            for S in ks:
                live[S] -= 1
            kept.discard(e)
    return kept


def gen_dirac(
    n: int,
    k: int,
    gamma: float,
    removal: str = "random",
    coloring: Coloring | str = "rainbow",
    seed: int | None = None,
) -> Instance:
    """Delete edges from the complete k-graph while the minimum codegree stays at least (1/2+gamma)n.

    ``structured`` only deletes edges inside the first floor(n/2) vertices.
    """
    if n < k or k < 2:
        raise InvalidArgument("need n >= k >= 2")
    if gamma < 0:
        raise Infeasible("requested codegree is below the half-n threshold")
    if removal not in ("random", "structured"):
        raise InvalidArgument("removal must be random or structured")
    floor = math.ceil((0.5 + gamma) * n)
    edges = list(combinations(range(n), k))
    notes = []
    if floor >= n - k + 1:
        notes.append(f"codegree floor {floor} leaves no room below the complete value {n - k + 1}; returned complete")
        kept = set(edges)
    else:
        if removal == "random":
            cand = list(edges)
            make_rng(seed, "removal").shuffle(cand)
        else:
            half = n // 2
            cand = [e for e in edges if e[-1] < half]
        kept = _remove(edges, cand, lambda e: list(combinations(e, k - 1)), floor)
    H, adv = color_edges(n, k, sorted(kept), coloring, seed)
    return Instance(H, _report(H, k - 1), notes, adv, len(set(H.color.values())))


def gen_loose_host(n: int, gamma: float, coloring: Coloring | str = "rainbow", seed: int | None = None) -> Instance:
    """3-graph with minimum vertex degree at least (7/16+gamma)n^2/2, thinned at random."""
    if n % 2 or n < 4:
        raise InvalidArgument("loose hosts need an even n >= 4")
    if gamma < 0:
        raise Infeasible("requested vertex degree is below the 7/16 threshold")
    coloring = parse_coloring(coloring)
    if coloring.kind == "random_bounded" and coloring.s is None:
        coloring = Coloring("random_bounded", coloring.param, 1)
    floor = math.ceil((7 / 16 + gamma) * n * n / 2)
    edges = list(combinations(range(n), 3))
    notes = []
    if floor >= math.comb(n - 1, 2):
        notes.append(f"degree floor {floor} is at least the complete value {math.comb(n - 1, 2)}; returned complete")
        kept = set(edges)
    else:
        cand = list(edges)
        make_rng(seed, "removal").shuffle(cand)
        kept = _remove(edges, cand, lambda e: [(v,) for v in e], floor)
    H, adv = color_edges(n, 3, sorted(kept), coloring, seed)
    return Instance(H, _report(H, 1), notes, adv, len(set(H.color.values())))


def generate(preset: str, n: int, k: int = 3, gamma: float = 0.1, coloring: str = "rainbow",
             seed: int | None = None, removal: str = "random") -> Instance:
    if preset == "complete":
        return gen_complete(n, k, coloring, seed)
    if preset == "dirac":
        return gen_dirac(n, k, gamma, removal, coloring, seed)
    if preset == "loose":
        if k != 3:
            raise InvalidArgument("loose preset is for k=3")
        return gen_loose_host(n, gamma, coloring, seed)
    raise InvalidArgument(f"unknown preset {preset!r}")
