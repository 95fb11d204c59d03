from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mono, rainbow, random_colored
from pchyper.errors import InvalidArgument, ParseError, UnsupportedRegime
from pchyper.hypergraph import (
    ColoredKGraph,
    check_hypotheses,
    format_instance,
    parse_instance,
)


def test_degree_examples():
    assert rainbow(5, 3).degree({0, 1}) == 3
    H = ColoredKGraph.from_edges(5, 3, [(0, 1, 2)])
    assert H.degree({3, 4}) == 0
    H = ColoredKGraph.from_edges(4, 3, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    assert H.degree({0, 1}) == 2


def test_degree_errors():
    H = rainbow(5, 3)
    with pytest.raises(InvalidArgument):
        H.degree({0, 1, 2})
    with pytest.raises(InvalidArgument):
        H.degree({0, 9})


def test_min_degree_examples():
    assert rainbow(6, 3).min_s_degree(2) == 4
    assert ColoredKGraph(5, 3, {}).min_s_degree(1) == 0
    E = [e for e in combinations(range(6), 3) if not {0, 1} <= set(e)]
    assert ColoredKGraph.from_edges(6, 3, E).min_s_degree(2) == 0
    with pytest.raises(InvalidArgument):
        rainbow(6, 3).min_s_degree(3)


def test_per_color_degree_examples():
    assert rainbow(5, 3).max_s_degree_per_color(2) == 1
    assert mono(5, 3).max_s_degree_per_color(2) == 3
    H = ColoredKGraph.from_edges(5, 3, [(0, 1, 2), (0, 1, 3), (0, 1, 4)], [1, 1, 2])
    assert H.max_s_degree_per_color(2) == 2
    with pytest.raises(InvalidArgument):
        H.max_s_degree_per_color(0)


def test_color_class():
    assert len(rainbow(4, 3).color_class(3)) == 1
    M = mono(5, 3)
    assert M.color_class(1).edges == M.edges
    E = list(combinations(range(5), 3))[:6]
    H = ColoredKGraph.from_edges(5, 3, E, [1, 1, 2, 2, 2, 3])
    assert H.color_class(2).edges == E[2:5]
    assert len(H.color_class(99)) == 0


def test_remove_vertices():
    H = rainbow(5, 3)
    assert H.remove_vertices(set()).edges == H.edges
    R = H.remove_vertices({4})
    assert R.vertices == frozenset(range(4)) and len(R) == 4
    H = ColoredKGraph.from_edges(5, 3, [(0, 1, 2), (2, 3, 4)])
    assert len(H.remove_vertices({2})) == 0


def test_check_hypotheses_examples():
    r = check_hypotheses(rainbow(8, 3), 2)
    assert r.gamma_margin == pytest.approx(0.25) and r.divisibility
    assert check_hypotheses(rainbow(8, 3), 1).divisibility
    assert not check_hypotheses(rainbow(7, 3), 1).divisibility
    with pytest.raises(UnsupportedRegime):
        check_hypotheses(rainbow(7, 5), 3)
    with pytest.raises(InvalidArgument):
        check_hypotheses(rainbow(7, 3), 3)


def test_loose_regime_reports_both_margins():
    r = check_hypotheses(rainbow(10, 3), 1)
    assert r.regime == "loose"
    assert r.gamma_vertex == pytest.approx(36 / 50 - 7 / 16)
    assert r.gamma_codegree == pytest.approx(8 / 10 - 1 / 4)


def test_constructor_rejects_bad_edges():
    with pytest.raises(InvalidArgument):
        ColoredKGraph.from_edges(4, 3, [(0, 1, 5)])
    with pytest.raises(InvalidArgument):
        ColoredKGraph.from_edges(4, 3, [(0, 1, 2), (2, 1, 0)])
    with pytest.raises(InvalidArgument):
        ColoredKGraph.from_edges(4, 3, [(0, 1, 1)])


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        parse_instance("4 3\n0 1 2 1\n0 2 1 5\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_instance("4 3\n0 1 7 1\n")


def test_parse_skips_comments():
    H = parse_instance("# note\n4 3\n# edge\n0 1 2 5\n")
    assert H.color == {(0, 1, 2): 5}


@st.composite
def small_graphs(draw):
    n = draw(st.integers(4, 9))
    k = draw(st.integers(2, min(4, n - 1)))
    p = draw(st.floats(0.1, 1.0))
    c = draw(st.integers(1, 6))
    seed = draw(st.integers(0, 10**6))
    return random_colored(n, k, p, c, seed)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_degrees_match_naive_enumeration(H):
    n, k = H.n, H.k
    for s in range(1, k):
        degs = {S: sum(1 for e in H.edges if set(S) <= set(e)) for S in combinations(range(n), s)}
        assert H.min_s_degree(s) == min(degs.values())
        assert H.max_s_degree(s) == max(degs.values())
        for S, d in degs.items():
            assert H.degree(S) == d
        per = max(
            (sum(1 for e in H.edges if set(S) <= set(e) and H.color[e] == c) for S in degs for c in H.colors),
            default=0,
        )
        assert H.max_s_degree_per_color(s) == per
        assert per <= H.max_s_degree(s)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_color_classes_partition_edges(H):
    classes = [set(H.color_class(c).edges) for c in H.colors]
    assert sum(map(len, classes)) == len(H)
    assert set().union(*classes) == set(H.edges)


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.data())
def test_removal_never_raises_degree(H, data):
    Q = set(data.draw(st.sets(st.integers(0, H.n - 1), max_size=2)))
    R = H.remove_vertices(Q)
    rest = sorted(set(range(H.n)) - Q)
    for S in combinations(rest, 1):
        assert R.degree(S) <= H.degree(S)


@settings(max_examples=40, deadline=None)
@given(small_graphs())
def test_instance_text_round_trip(H):
    text = format_instance(H)
    again = parse_instance(text)
    assert again.color == H.color and format_instance(again) == text


def test_monochromatic_per_color_equals_uncolored():
    H = mono(7, 3)
    for s in (1, 2):
        assert H.max_s_degree_per_color(s) == H.max_s_degree(s)
