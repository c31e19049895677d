from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs_with_matching
from urmatch.digraph import (
    MANY,
    Digraph,
    acyclicity_certificate,
    bd_map,
    count_paths,
    cycle_to_alternating_cycle,
    digraph_to_dot,
    extended_bd_map,
    path_counts_from,
    two_paths,
)
from urmatch.errors import CyclicDigraphError, InvalidCycleError, InvalidMatchingError, NotMaximumError
from urmatch.fixtures import C4, C4P, K12, MC4, MG_C4P, MP4, P4
from urmatch.matching import Matching, maximum_matching


def labelled_arcs(d) -> set[tuple[str, str]]:
    return {(d.label(i), d.label(j)) for i, j in d.arcs}


class TestBdMap:
    def test_c4_two_cycle(self):
        d = bd_map(C4, MC4)
        assert d.nodes == (0, 1)
        assert set(d.arcs) == {(0, 1), (1, 0)}

    def test_p4_single_arc(self):
        d = bd_map(P4, MP4)
        assert labelled_arcs(d) == {("(x2,y2)", "(x1,y1)")}

    def test_invalid_matching(self):
        with pytest.raises(InvalidMatchingError):
            bd_map(P4, Matching(((0, 1),)))

    def test_small_matchings_have_no_arcs(self):
        assert bd_map(K12, Matching()).arcs == ()
        assert bd_map(K12, Matching(((0, 1),))).arcs == ()

    @given(graphs_with_matching(max_x=6, max_y=6))
    def test_arcs_follow_definition(self, gm):
        g, m = gm
        d = bd_map(g, m)
        expected = {
            (i, j)
            for i, (xi, _) in enumerate(m.pairs)
            for j, (_, yj) in enumerate(m.pairs)
            if i != j and g.has_edge(xi, yj)
        }
        assert set(d.arcs) == expected
        assert len(d.arcs) == len(expected)


class TestExtendedBdMap:
    def test_c4p(self):
        d = extended_bd_map(C4P, MG_C4P)
        assert d.core_count == 2
        assert [v.name for v in d.free_nodes] == ["x1"]
        assert labelled_arcs(d) == {
            ("(x2,y2)", "(x3,y1)"),
            ("x1", "(x3,y1)"),
            ("x1", "(x2,y2)"),
        }

    def test_k12(self):
        d = extended_bd_map(K12, Matching(((0, 0),)))
        assert d.core_count == 1
        assert labelled_arcs(d) == {("(x1,y1)", "y2")}

    def test_requires_maximum(self):
        with pytest.raises(NotMaximumError):
            extended_bd_map(C4, Matching(((0, 0),)))

    @given(graphs_with_matching(max_x=6, max_y=6))
    def test_every_non_matching_edge_becomes_one_arc(self, gm):
        g, _ = gm
        m = maximum_matching(g)
        d = extended_bd_map(g, m)
        assert len(d.arcs) == len(g.edges) - len(m)
        for i, j in d.boundary_arcs:
            assert d.is_free(i) != d.is_free(j)


class TestCertificate:
    def test_c4_cycle(self):
        cert = acyclicity_certificate(bd_map(C4, MC4))
        assert not cert.acyclic
        assert cert.cycle == (0, 1)

    def test_p4_order(self):
        cert = acyclicity_certificate(bd_map(P4, MP4))
        assert cert.acyclic
        assert cert.topological_order == (1, 0)

    def test_empty(self):
        assert acyclicity_certificate(Digraph(())).topological_order == ()

    def test_cycle_is_rotated_to_minimum(self):
        d = Digraph(range(4), [(3, 1), (1, 2), (2, 3), (0, 1)])
        assert acyclicity_certificate(d).cycle == (1, 2, 3)

    @given(
        st.integers(1, 8).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), unique=True),
            )
        )
    )
    def test_certificate_checks_and_matches_brute_force(self, spec):
        n, arcs = spec
        d = Digraph(range(n), arcs)
        cert = acyclicity_certificate(d)
        assert cert.check(d)
        assert cert.acyclic == (not _has_cycle(n, arcs))

    def test_check_rejects_forgeries(self):
        d = bd_map(C4, MC4)
        forged = acyclicity_certificate(bd_map(P4, MP4))
        assert not forged.check(d)


def _has_cycle(n, arcs) -> bool:
    # transitive closure; slow but independent of the production code
    reach = [[False] * n for _ in range(n)]
    for i, j in arcs:
        reach[i][j] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return any(reach[v][v] for v in range(n))


class TestCycleTranslation:
    def test_c4(self):
        assert cycle_to_alternating_cycle(C4, MC4, (0, 1)) == [(0, 0), (0, 1), (1, 1), (1, 0)]

    def test_rejects_non_cycle(self):
        with pytest.raises(InvalidCycleError):
            cycle_to_alternating_cycle(P4, MP4, (0, 1))
        with pytest.raises(InvalidCycleError):
            cycle_to_alternating_cycle(C4, MC4, (0,))
        with pytest.raises(InvalidCycleError):
            cycle_to_alternating_cycle(C4, MC4, (0, 5))


class TestPaths:
    def test_c4p_two_paths_to_terminal(self):
        d = extended_bd_map(C4P, MG_C4P)
        x1 = d.node_of(MG_C4P.free_vertices(C4P)[0])
        e1 = next(i for i in range(d.core_count) if d.label(i) == "(x3,y1)")
        assert count_paths(d, x1, e1) == MANY
        paths = two_paths(d, x1, e1)
        assert sorted(len(p) for p in paths) == [2, 3]
        for p in paths:
            assert all((a, b) in d.arc_set for a, b in zip(p, p[1:]))

    def test_k12_single_path(self):
        d = extended_bd_map(K12, Matching(((0, 0),)))
        assert count_paths(d, 0, 1) == 1

    def test_cyclic_refused(self):
        with pytest.raises(CyclicDigraphError):
            path_counts_from(bd_map(C4, MC4), 0)

    def test_saturation(self):
        # a diamond chain has 4 paths end to end; counts saturate at MANY
        d = Digraph(range(7), [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)])
        assert count_paths(d, 0, 6) == MANY
        assert count_paths(d, 6, 0) == 0
        assert count_paths(d, 0, 0) == 1


def test_digraph_dot():
    text = digraph_to_dot(extended_bd_map(C4P, MG_C4P))
    assert text.startswith("digraph D {")
    assert text.count("->") == 3
    assert 'shape=circle, label="x1"' in text
    assert text.count("shape=box") == 2


def test_without_removes_incident_arcs():
    d = bd_map(C4, MC4).without([0])
    assert d.nodes == (1,)
    assert d.arcs == ()
