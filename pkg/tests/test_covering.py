import random
from collections import Counter
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rainbow, random_colored, random_partite
from oracles import brute_perfect_matching_exists, naive_pc
from pchyper.covering import (
    grow_canonical_path,
    grow_dense_path,
    greedy_path_cover,
    is_canonical,
    perfect_matching,
)
from pchyper.errors import ContradictionFlag, InvalidArgument
from pchyper.hypergraph import ColoredKGraph
from pchyper.paths import is_properly_colored


def complete_partite(m, k, color=None):
    parts = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    E = list(product(*parts))
    cols = [color or i + 1 for i in range(len(E))]
    return ColoredKGraph.from_edges(k * m, k, E, cols), parts


def test_dense_path_on_rainbow_tripartite():
    J, parts = complete_partite(6, 3)
    r = grow_dense_path(J, parts, d=1.0, m=6)
    assert len(r.path.vertices) >= 3 and is_properly_colored(J, r.path)
    assert r.deleted == 0
    # a maximal tight path in the complete rainbow host uses every vertex
    assert len(r.path.vertices) == 18


def test_dense_path_single_edge():
    J = ColoredKGraph.from_edges(6, 3, [(0, 2, 4)])
    r = grow_dense_path(J, [[0, 1], [2, 3], [4, 5]], d=0.01, m=2)
    assert sorted(r.path.vertices) == [0, 2, 4]


def test_dense_path_monochromatic_blocks_after_one_edge():
    J, parts = complete_partite(4, 3, color=1)
    r = grow_dense_path(J, parts, d=1.0, m=4)
    assert r.path.num_edges == 1
    # per-color codegree is the full part size, far above what the growth argument tolerates
    assert J.max_s_degree_per_color(2) == 4


def test_dense_path_empty_after_pruning():
    J = ColoredKGraph.from_edges(6, 3, [(0, 2, 4)])
    with pytest.raises(ContradictionFlag):
        grow_dense_path(J, [[0, 1], [2, 3], [4, 5]], d=3.0, m=2)
    with pytest.raises(ContradictionFlag):
        grow_dense_path(ColoredKGraph(6, 3, {}), [[0, 1], [2, 3], [4, 5]], d=0.1, m=2)


def test_dense_path_rejects_non_partite_edges():
    J = ColoredKGraph.from_edges(6, 3, [(0, 1, 4)])
    with pytest.raises(InvalidArgument):
        grow_dense_path(J, [[0, 1], [2, 3], [4, 5]], d=0.1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.2, 0.9))
def test_dense_path_deletion_bound_and_validity(seed, p):
    m, k = 8, 3
    J, parts = random_partite(m, k, p, 150, seed)
    d = len(J) / m**k / 2
    r = grow_dense_path(J, parts, d, m, seed=seed)
    assert r.deleted < d * m**k
    assert naive_pc(J, r.path.vertices, 3, 2, False)
    # the path visits the parts cyclically
    idx = {v: i for i, P in enumerate(parts) for v in P}
    seq = [idx[v] for v in r.path.vertices]
    assert all(seq[i] == seq[i % 3] for i in range(len(seq)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.3, 0.9))
def test_dense_path_reaches_half_dm(seed, p):
    m = 10
    J, parts = random_partite(m, 3, p, 300, seed)
    d = len(J) / m**3 / 2
    assert len(grow_dense_path(J, parts, d, m, seed=seed).path.vertices) >= d / 2 * m


def test_canonical_path_rainbow_tripartite():
    J, parts = complete_partite(4, 3)
    r = grow_canonical_path(J, parts, 1, d=1.0, m=4)
    P = r.path
    assert is_canonical(P, parts) and is_properly_colored(J, P)
    deg = Counter(v for i in range(0, len(P.vertices) - 2, 2) for v in P.vertices[i : i + 3])
    shared = [v for v, c in deg.items() if c == 2]
    assert shared and all(v in parts[0] or v in parts[2] for v in shared)
    assert all(v in parts[1] for v, c in deg.items() if c == 1 and v not in (P.vertices[0], P.vertices[-1]))


def test_canonical_path_single_edge_and_empty():
    J = ColoredKGraph.from_edges(6, 3, [(0, 2, 4)])
    r = grow_canonical_path(J, [[0, 1], [2, 3], [4, 5]], 1, d=0.01, m=2)
    assert r.path.num_edges == 1
    with pytest.raises(ContradictionFlag):
        grow_canonical_path(ColoredKGraph(6, 3, {}), [[0, 1], [2, 3], [4, 5]], 1, d=0.1, m=2)
    with pytest.raises(InvalidArgument):
        grow_canonical_path(J, [[0, 1], [2, 3], [4, 5]], 2, d=0.1, m=2)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_paths_are_canonical(seed):
    J, parts = random_partite(6, 5, 0.05, 500, seed)
    if not len(J):
        return
    try:
        r = grow_canonical_path(J, parts, 2, d=0.001, m=6, seed=seed)
    except ContradictionFlag:
        return
    assert is_canonical(r.path, parts) and is_properly_colored(J, r.path)


def test_cover_rainbow_k30():
    H = rainbow(30, 3)
    c = greedy_path_cover(H, 2, 0.1, 5, seed=0)
    assert 1 <= len(c.paths) <= 2
    assert sum(len(P.vertices) for P in c.paths) >= 27
    assert not c.shortfall


def test_cover_trivial_cases():
    c = greedy_path_cover(ColoredKGraph(10, 3, {}), 1, 0.1, 5)
    assert c.paths == [] and c.shortfall
    c = greedy_path_cover(rainbow(10, 3), 1, 1.0, 5)
    assert c.paths == [] and not c.shortfall
    with pytest.raises(InvalidArgument):
        greedy_path_cover(rainbow(10, 3), 3, 0.1, 5)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(3, 1), (3, 2), (4, 1), (5, 2)]), st.integers(1, 6))
def test_cover_paths_are_disjoint_and_pc(seed, kl, q):
    k, ell = kl
    H = random_colored(14, k, 0.5, 60, seed)
    c = greedy_path_cover(H, ell, 0.1, q, seed=seed)
    assert len(c.paths) <= q
    counts = Counter(v for P in c.paths for v in P.vertices)
    assert all(x == 1 for x in counts.values())
    for P in c.paths:
        assert P.num_edges >= 3
        assert naive_pc(H, P.vertices, k, ell, False)
    assert c.uncovered == set(range(14)) - set(counts)
    assert c.shortfall == (len(c.uncovered) > 0.1 * 14)


def test_matching_examples():
    K4 = {v: {u for u in range(4) if u != v} for v in range(4)}
    assert len(perfect_matching(K4, range(4))) == 2
    path = {0: {1}, 1: {0, 2}, 2: {1, 3}, 3: {2}}
    assert perfect_matching(path, range(4)) == [(0, 1), (2, 3)]
    star = {0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0}}
    assert perfect_matching(star, range(4)) is None
    with pytest.raises(InvalidArgument):
        perfect_matching(K4, range(3))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 5), st.floats(0.1, 0.9), st.integers(0, 10**6))
def test_matching_agrees_with_brute_force(half, p, seed):
    rng = random.Random(seed)
    U = list(range(2 * half))
    G = {v: set() for v in U}
    for x, y in combinations(U, 2):
        if rng.random() < p:
            G[x].add(y)
            G[y].add(x)
    M = perfect_matching(G, U)
    assert (M is not None) == brute_perfect_matching_exists(G, U)
    if M is not None:
        assert sorted(v for e in M for v in e) == U
        assert all(y in G[x] for x, y in M)
