"""Edge-colored k-uniform hypergraphs, degree computations and the instance text format."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .errors import InvalidArgument, ParseError, UnsupportedRegime

Edge = tuple[int, ...]

__all__ = [
    "ColoredKGraph",
    "HypothesisReport",
    "check_hypotheses",
    "parse_instance",
    "format_instance",
    "read_instance",
    "write_instance",
]


@dataclass(frozen=True)
class ColoredKGraph:
    """A k-graph on vertices 0..n-1 (or a subset, after vertex removal) with one color per edge.

    ``color`` maps each canonical (sorted) edge tuple to a positive integer.
    ``vertices`` defaults to range(n); ``remove_vertices`` keeps original labels.
    """

    n: int
    k: int
    color: Mapping[Edge, int]
    vertices: frozenset[int] = None  # type: ignore[assignment]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.k < 2:
            raise InvalidArgument(f"k must be at least 2, got {self.k}")
        if self.vertices is None:
            object.__setattr__(self, "vertices", frozenset(range(self.n)))
        canon: dict[Edge, int] = {}
        for e, c in self.color.items():
            t = tuple(sorted(e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise InvalidArgument(f"edge {e} does not have {self.k} distinct vertices")
            if any(v not in self.vertices for v in t):
                raise InvalidArgument(f"edge {e} uses a vertex outside the vertex set")
            if t in canon:
                raise InvalidArgument(f"duplicate edge {t}")
            if not isinstance(c, int) or c <= 0:
                raise InvalidArgument(f"color of {t} must be a positive integer, got {c!r}")
            canon[t] = c
        object.__setattr__(self, "color", canon)

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Iterable[int]], colors: Iterable[int] | int = 1):
        edges = [tuple(sorted(e)) for e in edges]
        if isinstance(colors, int):
            cols = [colors] * len(edges)
        else:
            cols = list(colors)
        if len(cols) != len(edges):
            raise InvalidArgument("edges and colors differ in length")
        mapping: dict[Edge, int] = {}
        for e, c in zip(edges, cols):
            if e in mapping:
                raise InvalidArgument(f"duplicate edge {e}")
            mapping[e] = c
        return cls(n, k, mapping)

    @property
    def edges(self) -> list[Edge]:
        if "edges" not in self._cache:
            self._cache["edges"] = sorted(self.color)
        return self._cache["edges"]

    def __len__(self) -> int:
        return len(self.color)

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self.color

    def phi(self, e: Iterable[int]) -> int | None:
        return self.color.get(tuple(sorted(e)))

    @property
    def colors(self) -> list[int]:
        return sorted(set(self.color.values()))

    def _check_s(self, s: int) -> None:
        if not 1 <= s <= self.k - 1:
            raise InvalidArgument(f"s must be in [1, {self.k - 1}], got {s}")

    def _subset_counts(self, s: int) -> Counter:
        key = ("sub", s)
        if key not in self._cache:
            cnt: Counter = Counter()
            for e in self.color:
                cnt.update(combinations(e, s))
            self._cache[key] = cnt
        return self._cache[key]

    def _color_subset_counts(self, s: int) -> Counter:
        key = ("csub", s)
        if key not in self._cache:
            cnt: Counter = Counter()
            for e, c in self.color.items():
                cnt.update((c, S) for S in combinations(e, s))
            self._cache[key] = cnt
        return self._cache[key]

    def degree(self, S: Iterable[int]) -> int:
        """Number of edges containing the set S."""
        S = tuple(sorted(set(S)))
        if len(S) >= self.k:
            raise InvalidArgument(f"|S| must be below k={self.k}")
        if any(v not in self.vertices for v in S):
            raise InvalidArgument(f"S contains unknown vertices: {S}")
        if not S:
            return len(self.color)
        return self._subset_counts(len(S))[S]

    def min_s_degree(self, s: int) -> int:
        self._check_s(s)
        cnt = self._subset_counts(s)
        vs = sorted(self.vertices)
        if len(vs) < s:
            return 0
        return min(cnt[S] for S in combinations(vs, s))

    def max_s_degree(self, s: int) -> int:
        self._check_s(s)
        return max(self._subset_counts(s).values(), default=0)

    def max_s_degree_per_color(self, s: int) -> int:
        """max over colors i of the maximum s-degree of the color class i."""
        self._check_s(s)
        return max(self._color_subset_counts(s).values(), default=0)

    def color_class(self, i: int) -> "ColoredKGraph":
        return ColoredKGraph(self.n, self.k, {e: c for e, c in self.color.items() if c == i}, self.vertices)

    def remove_vertices(self, Q: Iterable[int]) -> "ColoredKGraph":
        Q = set(Q)
        if not Q:
            return self
        keep = {e: c for e, c in self.color.items() if Q.isdisjoint(e)}
        return ColoredKGraph(self.n, self.k, keep, self.vertices - Q)

    def link(self, S: Iterable[int]) -> list[Edge]:
        """Sorted complements e \\ S over edges e containing S."""
        key = ("link", tuple(sorted(S)))
        if key not in self._cache:
            S = set(key[1])
            self._cache[key] = [tuple(v for v in e if v not in S) for e in self.edges if S <= set(e)]
        return self._cache[key]


@dataclass(frozen=True)
class HypothesisReport:
    regime: str
    gamma_margin: float
    c_margin: float
    divisibility: bool
    gamma_codegree: float | None = None
    gamma_vertex: float | None = None


def check_hypotheses(H: ColoredKGraph, ell: int) -> HypothesisReport:
    """Measure how far H sits above the degree threshold of its (k, ell) regime.

    gamma_margin is the slack over the threshold (negative means below it);
    c_margin is the largest per-color degree over its natural normalizer.
    For k=3, ell=1 both the codegree and the vertex-degree versions are reported;
    gamma_margin is the vertex-degree one.
    """
    k = H.k
    n = len(H.vertices)
    if not 1 <= ell <= k - 1:
        raise InvalidArgument(f"ell must be in [1, {k - 1}]")
    div = n % (k - ell) == 0
    if ell == k - 1:
        g = H.min_s_degree(k - 1) / n - 0.5
        c = H.max_s_degree_per_color(k - 1) / n
        return HypothesisReport("tight", g, c, div, gamma_codegree=g)
    if 2 * ell < k:
        g_co = H.min_s_degree(k - 1) / n - 1 / (2 * (k - ell))
        c = H.max_s_degree_per_color(ell) / n ** (k - ell)
        if k == 3 and ell == 1:
            g_v = H.min_s_degree(1) / (n * n / 2) - 7 / 16
            return HypothesisReport("loose", g_v, c, div, gamma_codegree=g_co, gamma_vertex=g_v)
        return HypothesisReport("ell", g_co, c, div, gamma_codegree=g_co)
    raise UnsupportedRegime(f"no degree threshold known for k={k}, ell={ell}")


def parse_instance(text: str) -> ColoredKGraph:
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, toks) for i, toks in lines if toks and not toks[0].startswith("#")]
    if not lines:
        raise ParseError("empty instance", line=1)
    lineno, head = lines[0]
    try:
        n, k = (int(x) for x in head)
    except ValueError:
        raise ParseError("header must be 'n k'", line=lineno) from None
    if n < 0 or k < 2:
        raise ParseError(f"bad header values n={n} k={k}", line=lineno)
    mapping: dict[Edge, int] = {}
    for lineno, toks in lines[1:]:
        if len(toks) != k + 1:
            raise ParseError(f"expected {k} vertices and a color, got {len(toks)} fields", line=lineno)
        try:
            vals = [int(x) for x in toks]
        except ValueError:
            raise ParseError("non-integer field", line=lineno) from None
        *vs, c = vals
        if any(not 0 <= v < n for v in vs):
            raise ParseError(f"vertex out of range [0, {n})", line=lineno)
        if len(set(vs)) != k:
            raise ParseError("repeated vertex in edge", line=lineno)
        if c <= 0:
            raise ParseError("color must be a positive integer", line=lineno)
        e = tuple(sorted(vs))
        if e in mapping:
            raise ParseError(f"duplicate edge {e}", line=lineno)
        mapping[e] = c
    return ColoredKGraph(n, k, mapping)


def format_instance(H: ColoredKGraph) -> str:
    out = [f"{H.n} {H.k}"]
    out.extend(" ".join(map(str, e)) + f" {H.color[e]}" for e in H.edges)
    return "\n".join(out) + "\n"


def read_instance(path) -> ColoredKGraph:
    with open(path) as fh:
        return parse_instance(fh.read())


def write_instance(H: ColoredKGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_instance(H))
