import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mono, rainbow, random_colored
from oracles import brute_pc_cycles, naive_hamilton, naive_pc
from pchyper.errors import InvalidArgument
from pchyper.exact import (
    BUDGET,
    FOUND,
    NONE,
    SearchBudget,
    canonical_cycle,
    count_pc_hamilton,
    find_pc_hamilton_exact,
    find_pc_path_exact,
)
from pchyper.hypergraph import ColoredKGraph


def test_rainbow_k6_tight_found_and_valid():
    H = rainbow(6, 3)
    r = find_pc_hamilton_exact(H, 2)
    assert r.status == FOUND
    assert naive_hamilton(H, r.cycle.vertices, 3, 2)
    assert naive_pc(H, r.cycle.vertices, 3, 2, True)


@pytest.mark.parametrize("ell", [1, 2])
def test_monochromatic_k6_has_none(ell):
    assert find_pc_hamilton_exact(mono(6, 3), ell).status == NONE


def test_divisibility_is_checked():
    with pytest.raises(InvalidArgument):
        find_pc_hamilton_exact(rainbow(7, 3), 1)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_rainbow_tight_counts_are_cyclic_orderings(n):
    assert count_pc_hamilton(rainbow(n, 3), 2).count == math.factorial(n - 1) // 2


def test_frozen_counts():
    # values from the brute-force permutation oracle below
    assert count_pc_hamilton(rainbow(6, 3), 1).count == 120
    assert count_pc_hamilton(rainbow(8, 3), 1).count == 5040
    assert count_pc_hamilton(ColoredKGraph(6, 3, {}), 2).count == 0


def test_loose_k6_count_matches_brute_force():
    assert len(brute_pc_cycles(rainbow(6, 3), 1)) == 120


def test_budget_is_not_none():
    r = find_pc_hamilton_exact(mono(9, 3), 2, SearchBudget(max_nodes=5))
    assert r.status == BUDGET and r.cycle is None
    c = count_pc_hamilton(rainbow(9, 3), 2, SearchBudget(max_nodes=50))
    assert c.status == BUDGET and not c.usable


def test_canonical_cycle_is_rotation_and_reflection_invariant():
    vs = (3, 0, 5, 1, 4, 2)
    key = canonical_cycle(vs, 3, 1)
    for r in range(0, 6, 2):
        assert canonical_cycle(vs[r:] + vs[:r], 3, 1) == key
    assert canonical_cycle((0, 1, 2, 3, 4, 5), 3, 2) == canonical_cycle((5, 4, 3, 2, 1, 0), 3, 2)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([(6, 2), (7, 2), (6, 1), (8, 1)]),
    st.floats(0.5, 1.0),
    st.integers(1, 8),
    st.integers(0, 10**6),
)
def test_count_matches_permutation_oracle(nl, p, ncolors, seed):
    n, ell = nl
    H = random_colored(n, 3, p, ncolors, seed)
    brute = brute_pc_cycles(H, ell)
    c = count_pc_hamilton(H, ell)
    assert c.usable and c.count == len(brute)
    f = find_pc_hamilton_exact(H, ell)
    assert (f.status == FOUND) == bool(brute)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(8, 2), (9, 2), (8, 1), (10, 1)]), st.integers(1, 6), st.integers(0, 10**6))
def test_isomorphism_invariance(nl, ncolors, seed):
    n, ell = nl
    H = random_colored(n, 3, 0.7, ncolors, seed)
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    K = ColoredKGraph(n, 3, {tuple(sorted(perm[v] for v in e)): c for e, c in H.color.items()})
    a = find_pc_hamilton_exact(H, ell).status
    b = find_pc_hamilton_exact(K, ell).status
    assert a == b


def test_path_search_examples():
    H = rainbow(10, 3)
    assert len(find_pc_path_exact(H, 1, (0,), (1,), 7).path.vertices) == 3
    r = find_pc_path_exact(H, 1, (0,), (1,), 7, min_vertices=7)
    assert r.status == FOUND and len(r.path.vertices) == 7
    assert r.path.vertices[0] == 0 and r.path.vertices[-1] == 1
    with pytest.raises(InvalidArgument):
        find_pc_path_exact(H, 1, (0, 2), (2, 3), 9)
    E = [e for e in H.edges if 0 not in e]
    iso = ColoredKGraph.from_edges(10, 3, E, list(range(1, len(E) + 1)))
    assert find_pc_path_exact(iso, 1, (0,), (1,), 9).status == NONE


def test_path_search_respects_forbidden_and_lengths():
    H = rainbow(10, 3)
    r = find_pc_path_exact(H, 2, (0, 1), (2, 3), 8, forbidden={4, 5}, min_vertices=7)
    assert r.status == FOUND
    P = r.path
    assert len(P.vertices) == 7 and not {4, 5} & set(P.vertices)
    assert naive_pc(H, P.vertices, 3, 2, False)
