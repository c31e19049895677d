"""Certificates re-check against the raw graph, and forged ones are caught."""

from __future__ import annotations

import copy
import json

from hypothesis import given

from conftest import bipartite_graphs, graphs_with_matching
from urmatch.analysis import all_max_ur, is_forcing_set, is_uniquely_restricted, unique_perfect_matching
from urmatch.certificates import (
    allmax_payload,
    dump_json,
    forcing_payload,
    perfect_payload,
    ur_payload,
    verify_allmax_payload,
    verify_alternating_cycle,
    verify_cover,
    verify_forcing_payload,
    verify_perfect_payload,
    verify_topological_order,
    verify_ur_payload,
)
from urmatch.fixtures import C4, C4P, K12, MC4, MP4, P4
from urmatch.matching import maximum_matching


class TestUr:
    @given(graphs_with_matching(max_x=6, max_y=6))
    def test_genuine_payloads_verify(self, gm):
        g, m = gm
        assert verify_ur_payload(g, m, ur_payload(is_uniquely_restricted(g, m))) == []

    def test_reversed_order_rejected(self):
        payload = ur_payload(is_uniquely_restricted(P4, MP4))
        payload["certificate"]["topological_order"].reverse()
        assert verify_ur_payload(P4, MP4, payload)

    def test_order_for_cyclic_matching_rejected(self):
        assert verify_topological_order(C4, MC4, [(0, 0), (1, 1)])
        assert verify_topological_order(C4, MC4, [(1, 1), (0, 0)])

    def test_broken_cycle_rejected(self):
        assert verify_alternating_cycle(C4, MC4, [(0, 0), (0, 1), (1, 1), (1, 0)]) == []
        assert verify_alternating_cycle(C4, MC4, [(0, 0), (0, 1), (1, 1)])
        assert verify_alternating_cycle(C4, MC4, [(0, 1), (0, 0), (1, 0), (1, 1)])
        assert verify_alternating_cycle(P4, MP4, [(0, 0), (0, 1), (1, 1), (1, 0)])

    def test_payload_for_other_matching_rejected(self):
        payload = ur_payload(is_uniquely_restricted(C4P, maximum_matching(C4P)))
        m = all_max_ur(C4P).base_matching
        assert verify_ur_payload(C4P, m, payload)


class TestPerfectAndForcing:
    def test_perfect(self):
        for g, m in ((P4, MP4), (C4, MC4)):
            assert verify_perfect_payload(g, m, perfect_payload(unique_perfect_matching(g, m))) == []
        payload = perfect_payload(unique_perfect_matching(C4, MC4))
        payload["status"] = "not_perfect"
        assert verify_perfect_payload(C4, MC4, payload)

    def test_forcing(self):
        for s in ([], [(0, 0)], [(1, 1)], [(0, 0), (1, 1)]):
            r = is_forcing_set(C4, MC4, s)
            assert verify_forcing_payload(C4, MC4, forcing_payload(C4, MC4, r)) == []

    def test_forged_forcing_claim(self):
        payload = forcing_payload(C4, MC4, is_forcing_set(C4, MC4, [(0, 0)]))
        payload["set"] = []
        assert verify_forcing_payload(C4, MC4, payload)


class TestCover:
    def test_cover(self):
        assert verify_cover(C4P, all_max_ur(C4P).base_matching, ["y1", "y2"]) == []
        assert verify_cover(C4P, all_max_ur(C4P).base_matching, ["y1", "x3"])
        assert verify_cover(K12, maximum_matching(K12), ["y1"])


class TestAllMax:
    @given(bipartite_graphs(max_x=4, max_y=4))
    def test_genuine_records_verify(self, g):
        for oracle in (False, True):
            r = all_max_ur(g, oracle=oracle)
            assert verify_allmax_payload(allmax_payload(g, r)) == []

    def test_json_round_trip(self):
        payload = allmax_payload(C4P, all_max_ur(C4P, oracle=True))
        assert verify_allmax_payload(json.loads(dump_json(payload))) == []

    def test_flipped_condition_rejected(self):
        payload = allmax_payload(K12, all_max_ur(K12, oracle=True))
        forged = copy.deepcopy(payload)
        forged["conditions"]["c1"] = False
        assert verify_allmax_payload(forged)

    def test_tampered_violation_path_rejected(self):
        payload = allmax_payload(C4P, all_max_ur(C4P, oracle=True))
        forged = copy.deepcopy(payload)
        forged["certificates"]["violations"][0]["paths"][1] = ["x1", "(x1,y1)", "(x3,y1)"]
        assert verify_allmax_payload(forged)

    def test_missing_witness_rejected(self):
        payload = allmax_payload(C4P, all_max_ur(C4P, oracle=True))
        del payload["certificates"]["oracle_witness"]
        assert verify_allmax_payload(payload)


def test_dump_json_is_valid_and_sorted():
    text = dump_json({"b": [[1, 2]], "a": {"z": True, "y": None}, "c": [{"k": 1}]})
    assert json.loads(text) == {"b": [[1, 2]], "a": {"z": True, "y": None}, "c": [{"k": 1}]}
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert '[[1, 2]]' in text
