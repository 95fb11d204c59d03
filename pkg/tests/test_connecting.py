import random
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mono, rainbow, random_colored
from oracles import naive_pc
from pchyper.connecting import (
    DirectedAux,
    aux_degrees,
    connect_ell,
    connect_loose,
    connect_many,
    connect_tight,
)
from pchyper.errors import InvalidArgument, StagedFailure
from pchyper.exact import FOUND, find_pc_path_exact
from pchyper.hypergraph import ColoredKGraph
from pchyper.paths import KLCycle, KLPath, is_properly_colored


def test_aux_degrees_examples():
    d = aux_degrees(DirectedAux(rainbow(10, 3)), (0, 1, 2, 3))
    assert (d.d_plus, d.d_minus, d.d_pm, d.extendable) == (6, 6, 6, True)
    H = ColoredKGraph.from_edges(10, 3, [(0, 1, 2)])
    d = aux_degrees(DirectedAux(H), (0, 1, 2, 3))
    assert (d.d_plus, d.d_minus, d.extendable) == (0, 0, False)
    d = aux_degrees(DirectedAux(mono(10, 3)), (0, 1, 2, 3))
    assert d.d_plus == 0


def test_aux_respects_exclusion():
    aux = DirectedAux(rainbow(10, 3), excluded={9})
    assert 9 not in aux.out_neighbors((0, 1, 2, 3))
    assert not aux.is_edge((0, 1, 2, 3, 9))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_aux_edges_are_pc_paths(seed):
    H = random_colored(8, 3, 0.8, 4, seed)
    aux = DirectedAux(H)
    rng = random.Random(seed)
    for _ in range(30):
        t = tuple(rng.sample(range(8), 5))
        if aux.is_edge(t):
            assert naive_pc(H, t, 3, 2, False)
        elif naive_pc(H, t, 3, 2, False):
            pytest.fail(f"{t} spans a pc tight path but is not an aux edge")


def test_connect_tight_examples():
    H = rainbow(12, 3)
    P = connect_tight(H, (0, 1, 2, 3), (4, 5, 6, 7), max_len=20)
    assert P is not None and is_properly_colored(H, P)
    assert P.vertices[:4] == (0, 1, 2, 3) and P.vertices[-4:] == (4, 5, 6, 7)
    with pytest.raises(InvalidArgument):
        connect_tight(H, (0, 1, 2, 3), (3, 4, 5, 6))


def test_connect_tight_avoiding_everything_else():
    # without edges through {3, 4} the two ends cannot be glued directly
    E = [e for e in rainbow(12, 3).edges if not {3, 4} <= set(e)]
    H = ColoredKGraph.from_edges(12, 3, E, list(range(1, len(E) + 1)))
    assert connect_tight(H, (0, 1, 2, 3), (4, 5, 6, 7), avoid=range(8, 12)) is None
    assert connect_tight(H, (0, 1, 2, 3), (4, 5, 6, 7), max_len=12) is not None


def test_connect_ell_examples():
    H = rainbow(12, 3)
    P = connect_ell(H, (0,), (1,), H.color[(0, 2, 3)], 7)
    assert P is not None and len(P.vertices) == 7
    with pytest.raises(InvalidArgument):
        connect_ell(H, (0,), (0,), 1, 1)


def test_connect_ell_adversarial_link():
    E = rainbow(12, 3).edges
    cols = [1 if 0 in e else i + 2 for i, e in enumerate(E)]
    H = ColoredKGraph.from_edges(12, 3, E, cols)
    assert connect_ell(H, (0,), (1,), 1, 0) is None
    assert connect_ell(H, (0,), (1,), 99, 0) is not None


def test_connect_ell_wider_edges():
    H = rainbow(14, 5)
    P = connect_ell(H, (0, 1), (2, 3), 0, 0, seed=3)
    assert P is not None and P.k == 5 and P.ell == 2
    assert set(P.vertices[:2]) == {0, 1} and set(P.vertices[-2:]) == {2, 3}
    assert len(P.vertices) == 3 * 5 - 4 * 2 + 4


def test_connect_loose_examples():
    H = rainbow(12, 3)
    P = connect_loose(H, 0, 1, 0, 0)
    assert P is not None and is_properly_colored(H, P)
    with pytest.raises(InvalidArgument):
        connect_loose(H, 2, 2, 0, 0)
    assert connect_loose(H, 0, 1, 0, 0, avoid=range(6, 12)) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.floats(0.06, 0.16))
def test_connect_loose_agrees_with_exact_search(seed, ncolors, p):
    # sparse hosts so that both outcomes occur
    H = random_colored(9, 3, p, ncolors, seed)
    P = connect_loose(H, 0, 1, 0, 0)
    r = find_pc_path_exact(H, 1, (0,), (1,), 7, min_vertices=7)
    assert (P is not None) == (r.status == FOUND)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.floats(0.06, 0.16))
def test_connect_ell_agrees_with_exact_search(seed, ncolors, p):
    # sparse hosts so that both outcomes occur
    H = random_colored(9, 3, p, ncolors, seed)
    P = connect_ell(H, (0,), (1,), 0, 0)
    r = find_pc_path_exact(H, 1, (0,), (1,), 7, min_vertices=7)
    assert (P is not None) == (r.status == FOUND)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 8))
def test_connect_tight_agrees_with_exact_search(seed, ncolors):
    H = random_colored(10, 3, 0.7, ncolors, seed)
    rng = random.Random(seed)
    vs = rng.sample(range(10), 8)
    v, w = tuple(vs[:4]), tuple(vs[4:])
    if not (naive_pc(H, v, 3, 2, False) and naive_pc(H, w, 3, 2, False)):
        return
    P = connect_tight(H, v, w, max_len=10)
    r = find_pc_path_exact(H, 2, v, w, 10)
    assert (P is not None) == (r.status == FOUND)


def _forbidden_ok(H, P, cx, cy):
    es = [P.vertices[i : i + 3] for i in range(0, len(P.vertices) - 2, 2)]
    return H.phi(es[0]) != cx and H.phi(es[-1]) != cy


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_end_constraints_hold(seed):
    H = random_colored(12, 3, 0.9, 40, seed)
    rng = random.Random(seed)
    x, y = rng.sample(range(12), 2)
    cx, cy = rng.choice(H.colors), rng.choice(H.colors)
    for P in (connect_loose(H, x, y, cx, cy, seed=seed), connect_ell(H, (x,), (y,), cx, cy, seed=seed)):
        if P is not None:
            assert is_properly_colored(H, P)
            assert P.vertices[0] == x and P.vertices[-1] == y
            assert _forbidden_ok(H, P, cx, cy)


def test_connect_many_identity():
    H = rainbow(10, 3)
    P = KLPath(3, 2, (0, 1, 2, 3, 4))
    res = connect_many(H, [P], {8, 9}, "tight", 4)
    assert res.result == P and res.used_Q == set()


def test_connect_many_two_tight_paths():
    H = rainbow(20, 3)
    P1, P2 = KLPath(3, 2, range(0, 6)), KLPath(3, 2, range(6, 12))
    res = connect_many(H, [P1, P2], set(range(12, 20)), "tight", 8)
    out = res.result.vertices
    assert out[:6] == P1.vertices and out[-6:] == P2.vertices
    assert set(out[6:-6]) <= set(range(12, 20)) and is_properly_colored(H, res.result)


def test_connect_many_loose_cycle():
    H = rainbow(30, 3)
    paths = [KLPath(3, 1, range(i, i + 5)) for i in (0, 5, 10)]
    res = connect_many(H, paths, set(range(15, 30)), "loose", 5, close_cycle=True, seed=1)
    C = res.result
    assert isinstance(C, KLCycle) and C.is_valid and is_properly_colored(H, C)
    assert len(res.used_Q) <= 15
    s = "," + ",".join(map(str, C.vertices + C.vertices)) + ","
    for P in paths:
        assert "," + ",".join(map(str, P.vertices)) + "," in s


def test_connect_many_names_the_failing_pair():
    H = rainbow(12, 3)
    paths = [KLPath(3, 1, range(0, 3)), KLPath(3, 1, range(3, 6))]
    with pytest.raises(StagedFailure) as exc:
        connect_many(H, paths, {6, 7}, "loose", 5)
    assert exc.value.details["pair"] == (0, 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["tight", "loose", "ell"]))
def test_connect_many_budget_and_contiguity(seed, kind):
    H = rainbow(26, 3)
    rng = random.Random(seed)
    vs = list(range(26))
    rng.shuffle(vs)
    ell = 2 if kind == "tight" else 1
    size = 5
    paths = [KLPath(3, ell, tuple(vs[i : i + size])) for i in (0, size, 2 * size)]
    Q = set(vs[3 * size :])
    g = 8 if kind == "tight" else 5
    res = connect_many(H, paths, Q, kind, g, seed=seed)
    assert len(res.used_Q) <= 3 * g and res.used_Q <= Q
    assert is_properly_colored(H, res.result)
    s = list(res.result.vertices)
    for P in paths:
        i = s.index(P.vertices[0])
        assert tuple(s[i : i + size]) == P.vertices

