"""Decision procedures over matchings, each returning a certificate.

* :func:`is_uniquely_restricted` - acyclicity of the BD digraph.
* :func:`unique_perfect_matching` - perfect and uniquely restricted.
* :func:`is_forcing_set` / :func:`minimum_forcing_set` - acyclicity after
  deleting the nodes of ``S``.
* :func:`all_max_ur_fast` - greedy matching plus path-count conditions on the
  extended digraph; :func:`all_max_ur_oracle` is the exhaustive reference.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable

from .budget import DEFAULT_BUDGET, OracleBudget
from .digraph import (
    MANY,
    AcyclicityCertificate,
    ExtendedBDDigraph,
    acyclicity_certificate,
    bd_map,
    cycle_to_alternating_cycle,
    extended_bd_map,
    path_counts_from,
    path_counts_to,
    two_paths,
)
from .errors import InvalidMatchingError, NotPerfectError
from .graph import BipartiteGraph, Edge
from .matching import (
    Matching,
    enumerate_maximum_matchings,
    enumerate_perfect_matchings,
    greedy_matching,
    require_valid,
)
from .oracle import find_alternating_cycle


@dataclass(frozen=True)
class UrVerdict:
    uniquely_restricted: bool
    matching: Matching
    certificate: AcyclicityCertificate
    alternating_cycle: tuple[Edge, ...] | None = None

    def __bool__(self) -> bool:
        return self.uniquely_restricted

    @property
    def order_edges(self) -> list[Edge] | None:
        """Topological order as matching edges (None when not UR)."""
        if self.certificate.topological_order is None:
            return None
        return [self.matching.pairs[i] for i in self.certificate.topological_order]

    def swapped_matching(self) -> Matching | None:
        """The second perfect matching of ``G[M]`` obtained along the cycle."""
        if self.alternating_cycle is None:
            return None
        cyc = set(self.alternating_cycle)
        return Matching(tuple(cyc.symmetric_difference(self.matching.pairs)))


def is_uniquely_restricted(g: BipartiteGraph, m: Matching) -> UrVerdict:
    """Decide whether ``m`` is uniquely restricted in ``g`` in linear time.

    Matchings of size 0 or 1 always are: their digraph has no arcs.

    Raises:
        InvalidMatchingError: ``m`` is not a matching of ``g``.
    """
    d = bd_map(g, m)
    cert = acyclicity_certificate(d)
    if cert.acyclic:
        return UrVerdict(True, m, cert)
    cycle = cycle_to_alternating_cycle(g, m, cert.cycle)
    return UrVerdict(False, m, cert, tuple(cycle))


def is_uniquely_restricted_oracle(g: BipartiteGraph, m: Matching, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Definition check: ``G[M]`` has exactly one perfect matching."""
    require_valid(g, m)
    sub, _, _ = m.induced_subgraph(g)
    return len(enumerate_perfect_matchings(sub, budget)) == 1


class PerfectStatus(enum.Enum):
    UNIQUE_PERFECT = "unique_perfect"
    NOT_PERFECT = "not_perfect"
    PERFECT_NOT_UNIQUE = "perfect_not_unique"


@dataclass(frozen=True)
class PerfectVerdict:
    status: PerfectStatus
    matching: Matching
    ur: UrVerdict | None = None


def unique_perfect_matching(g: BipartiteGraph, m: Matching) -> PerfectVerdict:
    """Is ``m`` the unique perfect matching of ``g``?"""
    d = bd_map(g, m)
    if not m.is_perfect(g):
        return PerfectVerdict(PerfectStatus.NOT_PERFECT, m)
    cert = acyclicity_certificate(d)
    if cert.acyclic:
        return PerfectVerdict(PerfectStatus.UNIQUE_PERFECT, m, UrVerdict(True, m, cert))
    cycle = tuple(cycle_to_alternating_cycle(g, m, cert.cycle))
    return PerfectVerdict(PerfectStatus.PERFECT_NOT_UNIQUE, m, UrVerdict(False, m, cert, cycle))


@dataclass(frozen=True)
class ForcingReport:
    set: tuple[Edge, ...]
    is_forcing: bool
    residual_certificate: AcyclicityCertificate


def _forcing_nodes(g: BipartiteGraph, m: Matching, s: Iterable[Edge]) -> list[int]:
    if not m.is_perfect(g):
        raise NotPerfectError("forcing sets are defined for perfect matchings")
    index = {e: i for i, e in enumerate(m.pairs)}
    nodes = []
    for e in s:
        e = (int(e[0]), int(e[1]))
        if e not in index:
            raise InvalidMatchingError(f"(x{e[0] + 1},y{e[1] + 1}) is not in the matching")
        nodes.append(index[e])
    return sorted(set(nodes))


def is_forcing_set(g: BipartiteGraph, m: Matching, s: Iterable[Edge]) -> ForcingReport:
    """``S`` forces ``m`` iff the BD digraph minus the nodes of ``S`` is acyclic.

    Raises:
        NotPerfectError: ``m`` is not perfect.
        InvalidMatchingError: ``S`` is not a subset of ``m``.
    """
    d = bd_map(g, m)
    nodes = _forcing_nodes(g, m, s)
    cert = acyclicity_certificate(d.without(nodes))
    return ForcingReport(tuple(m.pairs[i] for i in nodes), cert.acyclic, cert)


def minimum_forcing_set(g: BipartiteGraph, m: Matching, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[Edge, ...]:
    """A smallest forcing set of the perfect matching ``m``.

    This is a minimum feedback vertex set of the BD digraph. Iterative
    deepening on the set size; at each step one node of some remaining cycle
    must be deleted, so the search branches on the nodes of the certificate
    cycle. Exact, exponential in the answer; guarded by ``budget.max_nodes``
    on ``|m|`` and by ``budget.time_cap``.
    """
    d = bd_map(g, m)
    _forcing_nodes(g, m, ())
    budget.check_nodes(len(m))
    clock = budget.clock()

    def search(removed: frozenset[int], limit: int) -> frozenset[int] | None:
        clock.tick()
        cert = acyclicity_certificate(d.without(removed))
        if cert.acyclic:
            return removed
        if len(removed) == limit:
            return None
        for v in sorted(cert.cycle):
            hit = search(removed | {v}, limit)
            if hit is not None:
                return hit
        return None

    for limit in range(len(m) + 1):
        hit = search(frozenset(), limit)
        if hit is not None:
            return tuple(m.pairs[i] for i in sorted(hit))
    raise AssertionError("deleting every node always leaves an acyclic digraph")  # pragma: no cover


@dataclass(frozen=True)
class ConditionViolation:
    """Witness that one of c1-c3 fails, as node paths in the extended digraph.

    c1/c2: ``nodes`` is ``(source, target)`` and ``paths`` holds two distinct
    paths between them. c3: ``nodes`` is ``(free_a, free_b, k1, k2)`` and
    ``paths`` holds ``a~k1, b~k1, a~k2, b~k2`` (descendant form) or
    ``k1~a, k1~b, k2~a, k2~b`` (ancestor form) as given by ``direction``.
    """

    condition: str
    nodes: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]
    direction: str = "forward"


@dataclass(frozen=True)
class OracleWitness:
    matching: Matching
    alternating_cycle: tuple[Edge, ...]


@dataclass(frozen=True)
class AllMaxReport:
    """Fast all-maximum-UR decision, optionally joined with the oracle.

    ``c1_holds``..``c3_holds`` are None when the greedy matching is not
    uniquely restricted: the conditions are then not evaluated, because the
    answer is already "no".
    """

    base_matching: Matching
    base_ur: UrVerdict
    c1_holds: bool | None
    c2_holds: bool | None
    c3_holds: bool | None
    terminals: tuple[int, ...] = ()
    starts: tuple[int, ...] = ()
    violations: tuple[ConditionViolation, ...] = ()
    digraph: ExtendedBDDigraph | None = field(default=None, compare=False, repr=False)
    oracle_verdict: bool | None = None
    witness: OracleWitness | None = None
    maximum_matchings: tuple[Matching, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def base_is_ur(self) -> bool:
        return self.base_ur.uniquely_restricted

    @property
    def fast_verdict_conjunctive(self) -> bool:
        return self.base_is_ur and bool(self.c1_holds and self.c2_holds and self.c3_holds)

    @property
    def fast_verdict_disjunctive(self) -> bool:
        return self.base_is_ur and bool(self.c1_holds or self.c2_holds or self.c3_holds)


def _check_c1(d: ExtendedBDDigraph, order, free, terminals) -> ConditionViolation | None:
    for u in free:
        counts = path_counts_from(d, u, order)
        for t in terminals:
            if counts.get(t, 0) >= MANY:
                return ConditionViolation("c1", (u, t), tuple(map(tuple, two_paths(d, u, t))))
    return None


def _check_c2(d: ExtendedBDDigraph, order, free, starts) -> ConditionViolation | None:
    for u in free:
        counts = path_counts_to(d, u, order)
        for s in starts:
            if counts.get(s, 0) >= MANY:
                return ConditionViolation("c2", (s, u), tuple(map(tuple, two_paths(d, s, u))))
    return None


def _check_c3(d: ExtendedBDDigraph, order, free) -> ConditionViolation | None:
    k = d.core_count
    below = {u: {v for v in path_counts_from(d, u, order) if v < k} for u in free}
    above = {u: {v for v in path_counts_to(d, u, order) if v < k} for u in free}
    for a, b in itertools.combinations(free, 2):
        common = sorted(below[a] & below[b])
        if len(common) >= 2:
            k1, k2 = common[:2]
            paths = tuple(tuple(two_paths(d, s, t)[0]) for s, t in ((a, k1), (b, k1), (a, k2), (b, k2)))
            return ConditionViolation("c3", (a, b, k1, k2), paths, "forward")
    for a, b in itertools.combinations(free, 2):
        common = sorted(above[a] & above[b])
        if len(common) >= 2:
            k1, k2 = common[:2]
            paths = tuple(tuple(two_paths(d, s, t)[0]) for s, t in ((k1, a), (k1, b), (k2, a), (k2, b)))
            return ConditionViolation("c3", (a, b, k1, k2), paths, "backward")
    return None


def all_max_ur_fast(g: BipartiteGraph) -> AllMaxReport:
    """Polynomial-time answer to "are all maximum matchings uniquely restricted?".

    Builds the greedy matching and, if it is uniquely restricted, its
    extended digraph. ``terminals`` are core nodes without outgoing arcs and
    ``starts`` core nodes without incoming arcs, boundary arcs included.

    * c1: no free node has two or more paths to a terminal.
    * c2: no start has two or more paths to a free node.
    * c3: no two free nodes share two or more core descendants, nor two or
      more core ancestors.

    Both the conjunctive and the disjunctive combination are reported.
    """
    m = greedy_matching(g)
    ur = is_uniquely_restricted(g, m)
    if not ur:
        return AllMaxReport(m, ur, None, None, None)
    d = extended_bd_map(g, m)
    order = acyclicity_certificate(d).topological_order
    k = d.core_count
    free = list(range(k, len(d.nodes)))
    terminals = tuple(v for v in range(k) if not d.successors[v])
    starts = tuple(v for v in range(k) if not d.predecessors[v])
    found = [_check_c1(d, order, free, terminals), _check_c2(d, order, free, starts), _check_c3(d, order, free)]
    c1, c2, c3 = (v is None for v in found)
    return AllMaxReport(
        m, ur, c1, c2, c3, terminals, starts, tuple(v for v in found if v is not None), digraph=d
    )


@dataclass(frozen=True)
class AllMaxOracle:
    all_ur: bool
    matchings: tuple[Matching, ...]
    witness: OracleWitness | None = None

    def __bool__(self) -> bool:
        return self.all_ur


def all_max_ur_oracle(g: BipartiteGraph, budget: OracleBudget = DEFAULT_BUDGET) -> AllMaxOracle:
    """Enumerate every maximum matching and test each against the definition.

    On failure the first non-UR matching (in enumeration order) is returned
    with an alternating cycle found directly in the graph.
    """
    matchings = tuple(enumerate_maximum_matchings(g, budget))
    for mm in matchings:
        if not is_uniquely_restricted_oracle(g, mm, budget):
            cycle = find_alternating_cycle(g, mm, budget)
            assert cycle is not None, "oracle disagreement between definition and cycle search"
            return AllMaxOracle(False, matchings, OracleWitness(mm, tuple(cycle)))
    return AllMaxOracle(True, matchings)


def all_max_ur(g: BipartiteGraph, oracle: bool = False, budget: OracleBudget = DEFAULT_BUDGET) -> AllMaxReport:
    """:func:`all_max_ur_fast`, with oracle fields filled in when asked."""
    report = all_max_ur_fast(g)
    if not oracle:
        return report
    ref = all_max_ur_oracle(g, budget)
    return replace(report, oracle_verdict=ref.all_ur, witness=ref.witness, maximum_matchings=ref.matchings)
