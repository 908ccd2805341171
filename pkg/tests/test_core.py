from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from kneser import BudgetExceeded, Coloring, Edge, KneserParams, KSubset, ParameterError
from kneser.core import (
    compatibility_graph,
    enumerate_vertices,
    export_text,
    has_clique,
    is_edge,
    iter_cliques,
    pad_homomorphism,
    vertex_at,
    vertex_index,
    verify_homomorphism,
)


@st.composite
def small_params(draw, max_vertices=40):
    k = draw(st.integers(1, 4))
    n = draw(st.integers(k, 9))
    s = draw(st.integers(0, k - 1))
    r = draw(st.integers(2, 4))
    if comb(n, k) > max_vertices:
        n = k
    return KneserParams(n, k, r, s)


class TestParams:
    @pytest.mark.parametrize("args", [(5, 2, 1, 0), (5, 2, 2, 2), (5, 2, 2, 3), (1, 2, 2, 0),
                                      (65, 1, 2, 0), (5.0, 2, 2, 0), (5, 2, 2, -1)])
    def test_rejects(self, args):
        with pytest.raises(ParameterError):
            KneserParams(*args)

    def test_bound_applicable(self):
        assert KneserParams(3, 2, 2, 0).bound_applicable
        assert not KneserParams(4, 3, 2, 0).bound_applicable
        assert KneserParams(7, 3, 3, 1).bound_applicable

    def test_label_and_size(self):
        p = KneserParams(6, 3, 2, 1)
        assert p.label() == "KG^2(6,3,1)"
        assert p.num_vertices == 20


class TestSubsets:
    def test_of_and_elements(self):
        a = KSubset.of([3, 1, 5])
        assert a.elements == (1, 3, 5)
        assert len(a) == 3 and list(a) == [1, 3, 5]
        assert str(a) == "{1,3,5}"

    def test_meet(self):
        assert KSubset.of([1, 2, 3]).meet(KSubset.of([2, 3, 4])) == 2
        assert KSubset.of([1]).meet(KSubset.of([2])) == 0

    @given(st.integers(1, 8), st.data())
    def test_lex_order_matches_itertools(self, n, data):
        k = data.draw(st.integers(1, n))
        vs = enumerate_vertices(KneserParams(n, k, 2, 0))
        assert [v.elements for v in vs] == list(combinations(range(1, n + 1), k))
        assert vs == sorted(vs)

    @given(st.integers(1, 12), st.data())
    def test_rank_roundtrip(self, n, data):
        k = data.draw(st.integers(1, n))
        i = data.draw(st.integers(0, comb(n, k) - 1))
        v = vertex_at(i, n, k)
        assert len(v) == k and vertex_index(v, n) == i
        assert vertex_index(v.elements, n) == i

    def test_bad_elements(self):
        with pytest.raises(ParameterError):
            KSubset.of([0, 1])
        with pytest.raises(ParameterError):
            KSubset.of([1, 1])


class TestEdges:
    @given(small_params(), st.data())
    @settings(max_examples=60)
    def test_is_edge_matches_definition(self, params, data):
        vs = enumerate_vertices(params)
        if len(vs) < params.r:
            return
        idx = data.draw(st.lists(st.integers(0, len(vs) - 1), min_size=params.r,
                                 max_size=params.r, unique=True))
        members = [vs[i] for i in idx]
        want = all(len(set(a) & set(b)) <= params.s for a, b in combinations(members, 2))
        assert is_edge(members, params.r, params.s) == want

    def test_is_edge_arity_and_distinctness(self):
        a, b = KSubset.of([1, 2]), KSubset.of([3, 4])
        assert not is_edge([a, b], 3, 0)
        assert not is_edge([a, a], 2, 2)

    def test_edge_sorted(self):
        e = Edge.of([KSubset.of([3, 4]), KSubset.of([1, 2])])
        assert e.as_lists() == [[1, 2], [3, 4]]


class TestGraph:
    @given(small_params())
    @settings(max_examples=40)
    def test_cliques_match_brute_edges(self, params):
        g = compatibility_graph(params)
        got = sorted(iter_cliques((1 << len(g)) - 1, params.r, g.adj))
        want = oracles.edges(params.n, params.k, params.r, params.s)
        assert got == want
        assert has_clique((1 << len(g)) - 1, params.r, g.adj) == bool(want)

    def test_petersen(self):
        g = compatibility_graph(KneserParams(5, 2, 2, 0))
        assert len(g) == 10 and g.num_edges == 15
        assert all(g.degree(u) == 3 for u in range(10))

    def test_vertex_cap(self):
        with pytest.raises(BudgetExceeded):
            compatibility_graph(KneserParams(10, 3, 2, 0), max_vertices=56)


class TestColoring:
    def test_validation(self):
        with pytest.raises(ParameterError):
            Coloring((1, 4), 3)
        with pytest.raises(ParameterError):
            Coloring((0,), 1)

    def test_classes_and_used(self):
        c = Coloring.from_list([1, 3, 1])
        assert c.m == 3 and c.num_used == 2
        assert c.classes() == {1: 0b101, 3: 0b010}


class TestHomomorphism:
    def test_pad(self):
        assert pad_homomorphism(KSubset.of([1, 3]), 5, 2).elements == (1, 3, 6, 7)
        with pytest.raises(ParameterError):
            pad_homomorphism(KSubset.of([6]), 5, 1)

    @pytest.mark.parametrize("n,k,r,pad", [(5, 2, 2, 1), (6, 2, 2, 2), (7, 2, 3, 1), (6, 1, 3, 2)])
    def test_padding_is_homomorphism(self, n, k, r, pad):
        check = verify_homomorphism(KneserParams(n, k, r, 0), KneserParams(n + pad, k + pad, r, pad))
        assert check.passed

    def test_wrong_target(self):
        with pytest.raises(ParameterError):
            verify_homomorphism(KneserParams(5, 2, 2, 0), KneserParams(6, 3, 2, 0))


def test_export_format():
    text = export_text(KneserParams(4, 2, 2, 0), with_graph=True)
    lines = text.splitlines()
    assert lines[0] == "kg 4 2 2 0 6"
    assert lines[1] == "v 0 1 2" and lines[6] == "v 5 3 4"
    assert sorted(lines[7:]) == ["e 0 5", "e 1 4", "e 2 3"]
    assert export_text(KneserParams(4, 2, 2, 0)).splitlines() == lines[:7]
