from __future__ import annotations

import pytest
from hypothesis import given

from conftest import bipartite_graphs, graphs_with_matching
from urmatch.analysis import is_uniquely_restricted_oracle
from urmatch.budget import Deadline, OracleBudget
from urmatch.errors import BudgetExceeded
from urmatch.fixtures import C4, C4P, K12, MC4, MP4, P4
from urmatch.graph import BipartiteGraph
from urmatch.matching import Matching, enumerate_perfect_matchings
from urmatch.oracle import count_perfect_matchings, count_perfect_matchings_containing, find_alternating_cycle


def is_alternating_cycle(g: BipartiteGraph, m: Matching, cycle) -> bool:
    """Closed walk, simple, edges of g, alternating in and out of m starting in m."""
    if len(cycle) < 4 or len(cycle) % 2:
        return False
    if not all(g.has_edge(x, y) for x, y in cycle):
        return False
    if any(((x, y) in m) != (t % 2 == 0) for t, (x, y) in enumerate(cycle)):
        return False
    # consecutive edges share a vertex, alternating x then y
    for t in range(len(cycle)):
        a, b = cycle[t], cycle[(t + 1) % len(cycle)]
        shared = a[0] == b[0] if t % 2 == 0 else a[1] == b[1]
        if not shared:
            return False
    xs = [x for x, _ in cycle[::2]]
    ys = [y for _, y in cycle[::2]]
    return len(set(xs)) == len(xs) and len(set(ys)) == len(ys)


class TestCount:
    def test_examples(self):
        assert count_perfect_matchings(C4) == 2
        assert count_perfect_matchings(P4) == 1
        assert count_perfect_matchings(K12) == 0

    def test_complete_graph(self):
        k4 = BipartiteGraph(4, 4, tuple((x, y) for x in range(4) for y in range(4)))
        assert count_perfect_matchings(k4) == 24

    def test_containing(self):
        assert count_perfect_matchings_containing(C4, [(0, 0)]) == 1
        assert count_perfect_matchings_containing(C4, []) == 2
        assert count_perfect_matchings_containing(P4, [(1, 0)]) == 0

    @given(bipartite_graphs(max_x=5, max_y=5))
    def test_agrees_with_enumeration(self, g):
        assert count_perfect_matchings(g) == len(enumerate_perfect_matchings(g))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            count_perfect_matchings(C4, OracleBudget(max_nodes=1))


class TestAlternatingCycle:
    def test_c4(self):
        cycle = find_alternating_cycle(C4, MC4)
        assert cycle == [(0, 0), (0, 1), (1, 1), (1, 0)]

    def test_p4_none(self):
        assert find_alternating_cycle(P4, MP4) is None

    def test_c4p_other_matching(self):
        m = Matching(((0, 0), (1, 1)))
        cycle = find_alternating_cycle(C4P, m)
        assert set(cycle) == {(0, 0), (0, 1), (1, 1), (1, 0)}
        assert cycle[0] == (0, 0)

    @given(graphs_with_matching(max_x=5, max_y=5))
    def test_exists_iff_definition_fails(self, gm):
        g, m = gm
        cycle = find_alternating_cycle(g, m)
        assert (cycle is None) == is_uniquely_restricted_oracle(g, m)
        if cycle is not None:
            assert is_alternating_cycle(g, m, cycle)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            find_alternating_cycle(C4, MC4, OracleBudget(max_nodes=1))


class TestBudget:
    def test_positive(self):
        with pytest.raises(ValueError):
            OracleBudget(max_edges=0)
        with pytest.raises(ValueError):
            OracleBudget(time_cap=0)

    def test_deadline(self):
        clock = Deadline(0.0)
        with pytest.raises(BudgetExceeded):
            for _ in range(5000):
                clock.tick()
