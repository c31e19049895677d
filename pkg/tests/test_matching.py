from __future__ import annotations

import pytest
from hypothesis import given

from conftest import all_matchings, bipartite_graphs, graphs_with_matching
from urmatch.budget import OracleBudget
from urmatch.errors import BudgetExceeded, GraphFormatError, InvalidMatchingError, NotMaximumError
from urmatch.fixtures import C4, C4P, EMPTY, K12, MC4, MG_C4P, MP4, P4
from urmatch.graph import BipartiteGraph, Side
from urmatch.matching import (
    Matching,
    enumerate_maximum_matchings,
    enumerate_perfect_matchings,
    format_matching,
    greedy_matching,
    is_maximum,
    is_valid_matching,
    konig_cover,
    maximum_matching,
    parse_matching,
    require_valid,
)


def brute_max_size(g: BipartiteGraph) -> int:
    return max(len(m) for m in all_matchings(g))


class TestMatchingType:
    def test_pairs_sorted(self):
        assert Matching(((1, 1), (0, 0))).pairs == ((0, 0), (1, 1))

    def test_shared_vertex_rejected(self):
        with pytest.raises(InvalidMatchingError):
            Matching(((0, 0), (0, 1)))
        with pytest.raises(InvalidMatchingError):
            Matching(((0, 0), (1, 0)))

    def test_partner_lookup_and_free_vertices(self):
        m = MG_C4P
        assert m.x_partner == {1: 1, 2: 0}
        assert m.y_partner == {1: 1, 0: 2}
        assert [v.name for v in m.free_vertices(C4P)] == ["x1"]
        assert [v.name for v in Matching(((0, 0),)).free_vertices(K12)] == ["y2"]

    def test_is_perfect(self):
        assert MC4.is_perfect(C4)
        assert not Matching(((0, 0),)).is_perfect(K12)

    def test_induced_subgraph(self):
        sub, xs, ys = MG_C4P.induced_subgraph(C4P)
        assert (xs, ys) == ([1, 2], [0, 1])
        assert sorted(sub.edges) == [(0, 0), (0, 1), (1, 0)]


class TestValidity:
    def test_valid(self):
        assert is_valid_matching(C4, [(0, 0), (1, 1)]).valid

    def test_shared_vertex(self):
        check = is_valid_matching(C4, [(0, 0), (0, 1)])
        assert not check
        assert "x1" in check.violation

    def test_non_edge(self):
        check = is_valid_matching(P4, [(0, 1)])
        assert not check
        assert "not an edge" in check.violation

    def test_require_valid(self):
        with pytest.raises(InvalidMatchingError):
            require_valid(P4, Matching(((0, 1),)))

    def test_require_valid_bulk_path(self):
        n = 2000
        g = BipartiteGraph(n, n, tuple((i, i) for i in range(n)))
        require_valid(g, Matching(tuple((i, i) for i in range(n))))
        bad = Matching(tuple((i, (i + 1) % n) for i in range(n)))
        with pytest.raises(InvalidMatchingError, match=r"\(x1,y2\)"):
            require_valid(g, bad)


class TestMaximum:
    def test_examples(self):
        assert len(maximum_matching(C4)) == 2
        assert len(maximum_matching(K12)) == 1
        assert len(maximum_matching(EMPTY)) == 0

    @given(bipartite_graphs(max_x=5, max_y=5))
    def test_size_matches_brute_force(self, g):
        m = maximum_matching(g)
        assert is_valid_matching(g, m.pairs)
        assert len(m) == brute_max_size(g)

    @given(bipartite_graphs(max_x=6, max_y=6))
    def test_konig_cover_certifies(self, g):
        m = maximum_matching(g)
        cover = konig_cover(g, m)
        assert len(cover) == len(m)
        xs = {v.index for v in cover if v.side is Side.X}
        ys = {v.index for v in cover if v.side is Side.Y}
        assert all(x in xs or y in ys for x, y in g.edges)

    def test_konig_cover_refuses_non_maximum(self):
        with pytest.raises(NotMaximumError):
            konig_cover(C4, Matching(((0, 0),)))


class TestGreedy:
    def test_c4p(self):
        assert greedy_matching(C4P) == Matching(((2, 0), (1, 1)))

    def test_p4(self):
        assert greedy_matching(P4) == MP4

    def test_c4_is_a_perfect_matching(self):
        assert greedy_matching(C4) in {MC4, Matching(((0, 1), (1, 0)))}

    def test_k12_lowest_index(self):
        assert greedy_matching(K12) == Matching(((0, 0),))

    @given(bipartite_graphs(max_x=6, max_y=6))
    def test_greedy_is_maximum(self, g):
        m = greedy_matching(g)
        assert is_valid_matching(g, m.pairs)
        assert is_maximum(g, m)

    @given(bipartite_graphs(max_x=6, max_y=6))
    def test_deterministic(self, g):
        assert greedy_matching(g) == greedy_matching(g)


class TestEnumeration:
    def test_c4(self):
        assert enumerate_maximum_matchings(C4) == [MC4, Matching(((0, 1), (1, 0)))]

    def test_k12(self):
        ms = enumerate_maximum_matchings(K12)
        assert [m.pairs for m in ms] == [((0, 0),), ((0, 1),)]

    def test_c4p_has_four(self):
        assert len(enumerate_maximum_matchings(C4P)) == 4

    def test_empty_graph(self):
        assert enumerate_maximum_matchings(EMPTY) == [Matching()]

    def test_perfect(self):
        assert len(enumerate_perfect_matchings(C4)) == 2
        assert enumerate_perfect_matchings(P4) == [MP4]
        assert enumerate_perfect_matchings(K12) == []

    def test_budget_refusal(self):
        with pytest.raises(BudgetExceeded):
            enumerate_maximum_matchings(C4, OracleBudget(max_edges=3))
        with pytest.raises(BudgetExceeded):
            enumerate_perfect_matchings(C4, OracleBudget(max_nodes=1))

    @given(bipartite_graphs(max_x=4, max_y=4))
    def test_maximum_matches_subset_brute_force(self, g):
        size = brute_max_size(g)
        expected = sorted(m.pairs for m in all_matchings(g) if len(m) == size)
        assert [m.pairs for m in enumerate_maximum_matchings(g)] == expected

    @given(bipartite_graphs(max_x=4, max_y=4))
    def test_perfect_matches_subset_brute_force(self, g):
        expected = sorted(m.pairs for m in all_matchings(g) if m.is_perfect(g))
        got = sorted(m.pairs for m in enumerate_perfect_matchings(g))
        assert got == expected


class TestMatchingFormat:
    def test_round_trip(self):
        assert parse_matching(format_matching(MG_C4P)) == MG_C4P

    def test_range_checked_against_graph(self):
        with pytest.raises(GraphFormatError):
            parse_matching("m 3 1\n", K12)

    def test_repeated_vertex(self):
        with pytest.raises(GraphFormatError) as info:
            parse_matching("m 1 1\nm 1 2\n")
        assert info.value.line == 2

    def test_bad_line(self):
        with pytest.raises(GraphFormatError):
            parse_matching("e 1 1\n")

    def test_empty(self):
        assert parse_matching("") == Matching()

    @given(graphs_with_matching())
    def test_fast_and_line_parsers_agree(self, gm):
        g, m = gm
        text = format_matching(m)
        assert parse_matching(text, g) == m == parse_matching("# slow\n" + text, g)
