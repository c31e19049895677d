"""Serialisable certificates and their replay checks.

Encoders turn verdicts into plain dicts (1-based indices, JSON/YAML safe).
The ``verify_*`` functions re-check such dicts against a raw graph and
matching using only edge lookups: no digraph is rebuilt and no search is
re-run. Each returns a list of problems; an empty list means the certificate
holds.

Encodings:

* edge: ``[x, y]``
* vertex: ``"x3"`` / ``"y1"``
* extended-digraph node: ``"(x3,y1)"`` for the matching edge, ``"x1"`` for a
  free vertex
"""

from __future__ import annotations

import json
import re
from typing import Any, Iterable, Sequence

from .analysis import AllMaxReport, ConditionViolation, ForcingReport, PerfectVerdict, UrVerdict, is_uniquely_restricted
from .digraph import ExtendedBDDigraph, cycle_to_alternating_cycle
from .graph import BipartiteGraph, Edge, Side, VertexRef, format_graph, parse_graph
from .matching import Matching, format_matching, is_valid_matching, konig_cover, parse_matching

_CORE = re.compile(r"^\(x(\d+),y(\d+)\)$")
_VERTEX = re.compile(r"^([xy])(\d+)$")


def dump_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: objects one key per line, flat arrays kept on one line.

    Arrays holding no objects go through the C encoder in compact form, which
    keeps certificates with 10^5 pairs fast to write and easy to diff.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict) and obj:
        body = ",\n".join(
            f"{pad}{json.dumps(str(k))}: {dump_json(obj[k], indent, _level + 1)}" for k in sorted(obj)
        )
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, list) and any(isinstance(v, dict) for v in obj):
        body = ",\n".join(pad + dump_json(v, indent, _level + 1) for v in obj)
        return "[\n" + body + "\n" + end + "]"
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def enc_edge(e: Edge) -> list[int]:
    return [e[0] + 1, e[1] + 1]


def enc_edges(edges: Iterable[Edge]) -> list[list[int]]:
    return [enc_edge(e) for e in edges]


def dec_edges(items: Sequence[Sequence[int]]) -> list[Edge]:
    return [(int(x) - 1, int(y) - 1) for x, y in items]


def dec_vertex(name: str) -> VertexRef:
    hit = _VERTEX.match(name)
    if not hit:
        raise ValueError(f"bad vertex name {name!r}")
    return VertexRef(Side(hit.group(1)), int(hit.group(2)) - 1)


def enc_nodes(m: Matching, nodes: Sequence[int]) -> list[list[int]]:
    """Digraph nodes as the 1-based matching edges they stand for."""
    return (m.pair_array[list(nodes)].reshape(-1, 2) + 1).tolist()


def enc_ur(v: UrVerdict) -> dict[str, Any]:
    if v.uniquely_restricted:
        return {"topological_order": enc_nodes(v.matching, v.certificate.topological_order)}
    return {
        "digraph_cycle": enc_nodes(v.matching, v.certificate.cycle),
        "alternating_cycle": enc_edges(v.alternating_cycle),
    }


def enc_cover(g: BipartiteGraph, m: Matching) -> list[str]:
    return [v.name for v in konig_cover(g, m)]


def enc_violation(d: ExtendedBDDigraph, v: ConditionViolation) -> dict[str, Any]:
    return {
        "condition": v.condition,
        "direction": v.direction,
        "nodes": [d.label(n) for n in v.nodes],
        "paths": [[d.label(n) for n in p] for p in v.paths],
    }


def ur_payload(v: UrVerdict) -> dict[str, Any]:
    return {
        "uniquely_restricted": v.uniquely_restricted,
        "matching": (v.matching.pair_array + 1).tolist(),
        "certificate": enc_ur(v),
    }


def perfect_payload(v: PerfectVerdict) -> dict[str, Any]:
    out: dict[str, Any] = {"status": v.status.value, "matching": enc_edges(v.matching.pairs)}
    if v.ur is not None:
        out["certificate"] = enc_ur(v.ur)
    return out


def forcing_payload(g: BipartiteGraph, m: Matching, r: ForcingReport) -> dict[str, Any]:
    cert = r.residual_certificate
    if r.is_forcing:
        body = {"topological_order": enc_edges(m.pairs[i] for i in cert.topological_order)}
    else:
        body = {
            "digraph_cycle": enc_edges(m.pairs[i] for i in cert.cycle),
            "alternating_cycle": enc_edges(cycle_to_alternating_cycle(g, m, cert.cycle)),
        }
    return {"matching": enc_edges(m.pairs), "set": enc_edges(r.set), "is_forcing": r.is_forcing, "certificate": body}


def allmax_payload(g: BipartiteGraph, r: AllMaxReport) -> dict[str, Any]:
    """Self-contained record: graph and matchings are embedded as file text."""
    m = r.base_matching
    out: dict[str, Any] = {
        "graph": format_graph(g),
        "greedy_matching": format_matching(m),
        "conditions": {
            "base_ur": r.base_is_ur,
            "c1": r.c1_holds,
            "c2": r.c2_holds,
            "c3": r.c3_holds,
            "conjunctive": r.fast_verdict_conjunctive,
            "disjunctive": r.fast_verdict_disjunctive,
        },
        "oracle": r.oracle_verdict,
    }
    cert: dict[str, Any] = {"greedy_cover": enc_cover(g, m), "greedy_ur": enc_ur(r.base_ur)}
    if r.digraph is not None:
        d = r.digraph
        cert["terminals"] = [d.label(n) for n in r.terminals]
        cert["starts"] = [d.label(n) for n in r.starts]
        cert["violations"] = [enc_violation(d, v) for v in r.violations]
    if r.witness is not None:
        cert["oracle_witness"] = {
            "matching": format_matching(r.witness.matching),
            "cover": enc_cover(g, r.witness.matching),
            "alternating_cycle": enc_edges(r.witness.alternating_cycle),
        }
    elif r.oracle_verdict and r.maximum_matchings is not None:
        cert["oracle_matchings"] = [
            {"matching": format_matching(mm), "topological_order": enc_edges(is_uniquely_restricted(g, mm).order_edges)}
            for mm in r.maximum_matchings
        ]
    out["certificates"] = cert
    return out


# ---------------------------------------------------------------- replay


def verify_matching(g: BipartiteGraph, pairs: Sequence[Edge]) -> list[str]:
    check = is_valid_matching(g, pairs)
    return [] if check.valid else [f"invalid matching: {check.violation}"]


def verify_topological_order(g: BipartiteGraph, m: Matching, order: Sequence[Edge]) -> list[str]:
    """Every non-matching edge between saturated vertices must point forward."""
    if sorted(order) != list(m.pairs):
        return ["topological order is not a permutation of the matching"]
    pos = {e: p for p, e in enumerate(order)}
    xp, yp = m.x_partner, m.y_partner
    for x, y in g.edges:
        if (x, y) in m or x not in xp or y not in yp:
            continue
        if pos[(x, xp[x])] >= pos[(yp[y], y)]:
            return [f"edge (x{x + 1},y{y + 1}) points backwards in the order"]
    return []


def verify_alternating_cycle(g: BipartiteGraph, m: Matching, cycle: Sequence[Edge]) -> list[str]:
    """Closed simple walk, matching edges at even positions, sharing x then y."""
    n = len(cycle)
    if n < 4 or n % 2:
        return [f"alternating cycle has bad length {n}"]
    for t, (x, y) in enumerate(cycle):
        if not g.has_edge(x, y):
            return [f"(x{x + 1},y{y + 1}) is not an edge"]
        if ((x, y) in m) != (t % 2 == 0):
            return [f"edge {t + 1} of the cycle breaks the alternation"]
        nx_, ny_ = cycle[(t + 1) % n]
        if (t % 2 == 0 and nx_ != x) or (t % 2 == 1 and ny_ != y):
            return [f"edges {t + 1} and {(t + 1) % n + 1} of the cycle are not consecutive"]
    xs = [cycle[t][0] for t in range(0, n, 2)]
    ys = [cycle[t][1] for t in range(0, n, 2)]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        return ["alternating cycle is not simple"]
    return []


def verify_cover(g: BipartiteGraph, m: Matching, cover: Sequence[str]) -> list[str]:
    """A vertex cover of size ``|m|`` proves ``m`` maximum."""
    vs = {dec_vertex(v) for v in cover}
    if len(vs) != len(m):
        return [f"cover has {len(vs)} vertices, matching has {len(m)} edges"]
    for x, y in g.edges:
        if VertexRef.x(x) not in vs and VertexRef.y(y) not in vs:
            return [f"edge (x{x + 1},y{y + 1}) is not covered"]
    return []


def verify_ur_payload(g: BipartiteGraph, m: Matching, payload: dict[str, Any]) -> list[str]:
    errs = verify_matching(g, m.pairs)
    if errs:
        return errs
    if sorted(dec_edges(payload["matching"])) != list(m.pairs):
        return ["certificate was issued for a different matching"]
    cert = payload["certificate"]
    if payload["uniquely_restricted"]:
        return verify_topological_order(g, m, dec_edges(cert["topological_order"]))
    return verify_alternating_cycle(g, m, dec_edges(cert["alternating_cycle"]))


def verify_perfect_payload(g: BipartiteGraph, m: Matching, payload: dict[str, Any]) -> list[str]:
    errs = verify_matching(g, m.pairs)
    if errs:
        return errs
    status = payload["status"]
    perfect = m.is_perfect(g)
    if status == "not_perfect":
        return [] if not perfect else ["matching is perfect"]
    if not perfect:
        return ["matching is not perfect"]
    return verify_ur_payload(g, m, {**payload, "uniquely_restricted": status == "unique_perfect"})


def verify_forcing_payload(g: BipartiteGraph, m: Matching, payload: dict[str, Any]) -> list[str]:
    """A forcing set is certified by an order of the remaining matching edges."""
    errs = verify_matching(g, m.pairs)
    if errs:
        return errs
    if not m.is_perfect(g):
        return ["matching is not perfect"]
    s = set(dec_edges(payload["set"]))
    if not s <= m.pair_set:
        return ["set is not a subset of the matching"]
    cert = payload["certificate"]
    rest = Matching(tuple(e for e in m.pairs if e not in s))
    sub = _without_vertices(g, s)
    if payload["is_forcing"]:
        return verify_topological_order(sub, rest, dec_edges(cert["topological_order"]))
    return verify_alternating_cycle(sub, rest, dec_edges(cert["alternating_cycle"]))


def _without_vertices(g: BipartiteGraph, s: Iterable[Edge]) -> BipartiteGraph:
    """Same vertex numbering, edges touching ``s`` dropped."""
    xs = {x for x, _ in s}
    ys = {y for _, y in s}
    return BipartiteGraph(g.x_count, g.y_count, tuple((x, y) for x, y in g.edges if x not in xs and y not in ys))


def _arc_ok(g: BipartiteGraph, m: Matching, a: str, b: str) -> bool:
    """Is ``a -> b`` an arc of the extended digraph of ``(g, m)``?"""
    ca, cb = _CORE.match(a), _CORE.match(b)
    if ca:
        xa, ya = int(ca.group(1)) - 1, int(ca.group(2)) - 1
        if (xa, ya) not in m:
            return False
        if cb:
            xb, yb = int(cb.group(1)) - 1, int(cb.group(2)) - 1
            return (xb, yb) in m and (xb, yb) != (xa, ya) and g.has_edge(xa, yb)
        w = dec_vertex(b)
        return w.side is Side.Y and w.index not in m.y_partner and g.has_edge(xa, w.index)
    u = dec_vertex(a)
    if u.side is not Side.X or u.index in m.x_partner or not cb:
        return False
    xb, yb = int(cb.group(1)) - 1, int(cb.group(2)) - 1
    return (xb, yb) in m and g.has_edge(u.index, yb)


def _path_errors(g: BipartiteGraph, m: Matching, path: Sequence[str], src: str, dst: str) -> list[str]:
    if not path or path[0] != src or path[-1] != dst:
        return [f"path {path} does not run from {src} to {dst}"]
    if len(set(path)) != len(path):
        return [f"path {path} repeats a node"]
    for a, b in zip(path, path[1:]):
        if not _arc_ok(g, m, a, b):
            return [f"{a} -> {b} is not an arc"]
    return []


def _is_free(m: Matching, name: str) -> bool:
    if _CORE.match(name):
        return False
    v = dec_vertex(name)
    return v.index not in (m.x_partner if v.side is Side.X else m.y_partner)


def _core_degree(g: BipartiteGraph, name: str, side: Side) -> int:
    hit = _CORE.match(name)
    if not hit:
        return -1
    x, y = int(hit.group(1)) - 1, int(hit.group(2)) - 1
    return len(g.x_adj[x]) if side is Side.X else len(g.y_adj[y])


def verify_violation(g: BipartiteGraph, m: Matching, v: dict[str, Any]) -> list[str]:
    """Check a c1/c2/c3 violation witness against the raw graph.

    A core node has no outgoing arc exactly when its X endpoint has degree 1,
    and no incoming arc exactly when its Y endpoint has degree 1.
    """
    cond, nodes, paths = v["condition"], v["nodes"], v["paths"]
    errs: list[str] = []
    if cond in ("c1", "c2"):
        src, dst = nodes
        if len(paths) != 2 or paths[0] == paths[1]:
            return [f"{cond}: two distinct paths required"]
        if cond == "c1" and not (_is_free(m, src) and _core_degree(g, dst, Side.X) == 1):
            return ["c1: source must be free and target terminal"]
        if cond == "c2" and not (_is_free(m, dst) and _core_degree(g, src, Side.Y) == 1):
            return ["c2: source must be a start node and target free"]
        for p in paths:
            errs += _path_errors(g, m, p, src, dst)
        return errs
    if cond == "c3":
        a, b, k1, k2 = nodes
        if not (_is_free(m, a) and _is_free(m, b)) or a == b:
            return ["c3: needs two distinct free nodes"]
        if not (_CORE.match(k1) and _CORE.match(k2)) or k1 == k2:
            return ["c3: needs two distinct core nodes"]
        ends = [(a, k1), (b, k1), (a, k2), (b, k2)]
        if v.get("direction") == "backward":
            ends = [(k, f) for f, k in ends]
        for p, (s, t) in zip(paths, ends):
            errs += _path_errors(g, m, p, s, t)
        return errs
    return [f"unknown condition {cond!r}"]


def verify_allmax_payload(payload: dict[str, Any]) -> list[str]:
    """Replay every certificate carried by an all-maximum-UR record."""
    g = parse_graph(payload["graph"])
    m = parse_matching(payload["greedy_matching"], g)
    cert = payload["certificates"]
    cond = payload["conditions"]
    errs = verify_matching(g, m.pairs)
    if errs:
        return errs
    errs += verify_cover(g, m, cert["greedy_cover"])
    ur = cert["greedy_ur"]
    if cond["base_ur"]:
        errs += verify_topological_order(g, m, dec_edges(ur["topological_order"]))
    else:
        errs += verify_alternating_cycle(g, m, dec_edges(ur["alternating_cycle"]))
        if cond["conjunctive"] or cond["disjunctive"]:
            errs.append("fast verdict true although the greedy matching is not UR")
    failed = {v["condition"] for v in cert.get("violations", [])}
    for name in ("c1", "c2", "c3"):
        if cond["base_ur"] and (cond[name] is False) != (name in failed):
            errs.append(f"{name} is reported false without a matching violation witness")
    for v in cert.get("violations", []):
        errs += verify_violation(g, m, v)
    if cond["base_ur"]:
        c = [cond["c1"], cond["c2"], cond["c3"]]
        if cond["conjunctive"] != all(c) or cond["disjunctive"] != any(c):
            errs.append("fast verdicts inconsistent with the condition values")
    if payload.get("oracle") is False:
        w = cert.get("oracle_witness")
        if w is None:
            errs.append("oracle verdict false without a witness")
        else:
            wm = parse_matching(w["matching"], g)
            errs += verify_matching(g, wm.pairs)
            errs += verify_cover(g, wm, w["cover"])
            errs += verify_alternating_cycle(g, wm, dec_edges(w["alternating_cycle"]))
    elif payload.get("oracle") is True:
        listed = cert.get("oracle_matchings", [])
        seen = set()
        for item in listed:
            mm = parse_matching(item["matching"], g)
            seen.add(mm.pairs)
            errs += verify_matching(g, mm.pairs)
            if len(mm) != len(m):
                errs.append("listed maximum matching has the wrong size")
            errs += verify_topological_order(g, mm, dec_edges(item["topological_order"]))
        if len(seen) != len(listed) or m.pairs not in seen:
            errs.append("oracle matching list has duplicates or misses the greedy matching")
    return errs
