"""(k, l)-paths and cycles: edges, proper-coloring checks, ends and splicing."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidCycle, InvalidPath, MissingEdge, ParseError, SpliceInvalid, TooShort
from .hypergraph import ColoredKGraph, Edge

__all__ = [
    "KLPath",
    "KLCycle",
    "Ends",
    "path_edges",
    "cycle_edges",
    "is_properly_colored",
    "ends",
    "splice",
    "is_hamilton",
    "parse_certificate",
    "format_certificate",
]


@dataclass(frozen=True)
class KLPath:
    k: int
    ell: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def stride(self) -> int:
        return self.k - self.ell

    def structural_error(self) -> str | None:
        k, ell, vs = self.k, self.ell, self.vertices
        if not 1 <= ell <= k - 1:
            return f"ell={ell} outside [1, {k - 1}]"
        if len(set(vs)) != len(vs):
            return "repeated vertex"
        if len(vs) < k:
            return f"fewer than k={k} vertices"
        if (len(vs) - ell) % (k - ell):
            return f"{len(vs)} vertices is not congruent to {ell} mod {k - ell}"
        return None

    @property
    def is_valid(self) -> bool:
        return self.structural_error() is None

    @property
    def num_edges(self) -> int:
        return (len(self.vertices) - self.ell) // self.stride

    def reversed(self) -> "KLPath":
        return KLPath(self.k, self.ell, self.vertices[::-1])

    def same_as(self, other: "KLPath") -> bool:
        return (self.k, self.ell) == (other.k, other.ell) and other.vertices in (self.vertices, self.vertices[::-1])


@dataclass(frozen=True)
class KLCycle:
    k: int
    ell: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def structural_error(self) -> str | None:
        k, ell, vs = self.k, self.ell, self.vertices
        if not 1 <= ell <= k - 1:
            return f"ell={ell} outside [1, {k - 1}]"
        if len(set(vs)) != len(vs):
            return "repeated vertex"
        if len(vs) % (k - ell):
            return f"{k - ell} does not divide {len(vs)}"
        # shorter cycles would make consecutive edges overlap in more than ell vertices
        if len(vs) < 2 * k - ell:
            return f"fewer than {2 * k - ell} vertices"
        return None

    @property
    def is_valid(self) -> bool:
        return self.structural_error() is None


@dataclass(frozen=True)
class Ends:
    ell_ends: tuple[tuple[int, ...], tuple[int, ...]]
    end_paths: tuple[tuple[int, ...], tuple[int, ...]] | None


def path_edges(P: KLPath) -> list[Edge]:
    err = P.structural_error()
    if err:
        raise InvalidPath(err)
    s, vs = P.stride, P.vertices
    return [tuple(sorted(vs[i : i + P.k])) for i in range(0, len(vs) - P.k + 1, s)]


def cycle_edges(C: KLCycle) -> list[Edge]:
    err = C.structural_error()
    if err:
        raise InvalidCycle(err)
    n, vs, k = len(C.vertices), C.vertices, C.k
    return [tuple(sorted(vs[(i + j) % n] for j in range(k))) for i in range(0, n, k - C.ell)]


def _edges_of(X) -> list[Edge]:
    return cycle_edges(X) if isinstance(X, KLCycle) else path_edges(X)


def is_properly_colored(H: ColoredKGraph, X: KLPath | KLCycle) -> bool:
    """True iff every two intersecting edges of X get different colors.

    Raises MissingEdge if some edge of X is not in H.
    """
    es = _edges_of(X)
    cols = []
    for e in es:
        c = H.color.get(e)
        if c is None:
            raise MissingEdge(f"edge {e} is not in the hypergraph", edge=e)
        cols.append(c)
    sets = [set(e) for e in es]
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            if cols[i] == cols[j] and not sets[i].isdisjoint(sets[j]):
                return False
    return True


def ends(P: KLPath, end_paths: bool = True) -> Ends:
    """First and last ell vertices; for tight paths also the first and last 2k-2 vertices.

    With ``end_paths=False`` a tight path shorter than 2k-2 returns None for the end paths
    instead of raising TooShort.
    """
    err = P.structural_error()
    if err:
        raise InvalidPath(err)
    vs, k, ell = P.vertices, P.k, P.ell
    ell_ends = (vs[:ell], vs[-ell:])
    ep = None
    if ell == k - 1:
        if len(vs) >= 2 * k - 2:
            ep = (vs[: 2 * k - 2], vs[-(2 * k - 2) :])
        elif end_paths:
            raise TooShort(f"tight path needs at least {2 * k - 2} vertices for end paths")
    return Ends(ell_ends, ep)


def splice(P1: KLPath, connector: Sequence[int], P2: KLPath, H: ColoredKGraph | None = None) -> KLPath:
    """Concatenate P1, the connector and P2 and check the result is a (k, l)-path.

    When H is given the result must also lie in H and be properly colored.
    """
    if (P1.k, P1.ell) != (P2.k, P2.ell):
        raise SpliceInvalid("paths have different (k, l)")
    for P in (P1, P2):
        if P.structural_error():
            raise SpliceInvalid(f"input path invalid: {P.structural_error()}")
    seq = P1.vertices + tuple(connector) + P2.vertices
    out = KLPath(P1.k, P1.ell, seq)
    err = out.structural_error()
    if err:
        raise SpliceInvalid(err)
    if H is not None:
        try:
            ok = is_properly_colored(H, out)
        except MissingEdge as exc:
            raise SpliceInvalid(str(exc)) from exc
        if not ok:
            raise SpliceInvalid("spliced path is not properly colored")
    return out


def is_hamilton(H: ColoredKGraph, C: KLCycle) -> bool:
    if not C.is_valid:
        return False
    if set(C.vertices) != set(H.vertices) or len(C.vertices) != len(H.vertices):
        return False
    return all(e in H.color for e in cycle_edges(C))


def parse_certificate(line: str) -> KLPath | KLCycle:
    toks = line.split()
    if len(toks) < 3 or toks[0] not in ("PATH", "CYCLE"):
        raise ParseError("certificate must start with PATH or CYCLE followed by k l")
    try:
        k, ell, *vs = (int(t) for t in toks[1:])
    except ValueError:
        raise ParseError("non-integer field in certificate") from None
    cls = KLPath if toks[0] == "PATH" else KLCycle
    return cls(k, ell, tuple(vs))


def format_certificate(X: KLPath | KLCycle) -> str:
    tag = "CYCLE" if isinstance(X, KLCycle) else "PATH"
    return f"{tag} {X.k} {X.ell} " + " ".join(map(str, X.vertices))


def parse_certificates(text: str) -> list[KLPath | KLCycle]:
    out = []
    for i, ln in enumerate(text.splitlines(), 1):
        if ln.strip() and not ln.lstrip().startswith("#"):
            try:
                out.append(parse_certificate(ln))
            except ParseError as exc:
                raise ParseError(str(exc), line=i) from None
    return out


def vertices_of(items: Iterable[KLPath | KLCycle]) -> set[int]:
    out: set[int] = set()
    for X in items:
        out.update(X.vertices)
    return out
