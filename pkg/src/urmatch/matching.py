"""Matchings: construction, validation, maximum/greedy matching and enumeration.

Matching file format: one ``m <x> <y>`` line (1-based) per matched edge,
``#`` comment lines allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .budget import DEFAULT_BUDGET, OracleBudget
from .errors import GraphFormatError, InvalidMatchingError, NotMaximumError
from .graph import BipartiteGraph, Edge, Side, VertexRef, _content_lines, _int_field, scan_records

UNMATCHED = -1


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint set of ``(x, y)`` pairs, stored sorted.

    The position of a pair in :attr:`pairs` is its node id in every digraph
    built from the matching. Membership in a particular host graph is checked
    by :func:`require_valid`, not here.
    """

    pairs: tuple[Edge, ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(x), int(y)) for x, y in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        xs = {x for x, _ in pairs}
        ys = {y for _, y in pairs}
        if len(xs) != len(pairs) or len(ys) != len(pairs):
            raise InvalidMatchingError(f"pairs share a vertex: {pairs}")

    @classmethod
    def _trusted(cls, pairs: tuple[Edge, ...]) -> Matching:
        """Wrap pairs that are already sorted and vertex-disjoint."""
        m = object.__new__(cls)
        object.__setattr__(m, "pairs", pairs)
        return m

    @classmethod
    def of(cls, pairs: Iterable[Edge]) -> Matching:
        return cls(tuple(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, edge: object) -> bool:
        return edge in self.pair_set

    @cached_property
    def pair_set(self) -> frozenset[Edge]:
        return frozenset(self.pairs)

    @cached_property
    def pair_array(self) -> np.ndarray:
        """Pairs as an ``(n, 2)`` int64 array."""
        return np.array(self.pairs, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def x_partner(self) -> dict[int, int]:
        return {x: y for x, y in self.pairs}

    @cached_property
    def y_partner(self) -> dict[int, int]:
        return {y: x for x, y in self.pairs}

    def partner_of(self, v: VertexRef) -> int | None:
        table = self.x_partner if v.side is Side.X else self.y_partner
        return table.get(v.index)

    def free_vertices(self, g: BipartiteGraph) -> list[VertexRef]:
        """Unsaturated vertices ``V_f``, X side first, each side in index order."""
        xp, yp = self.x_partner, self.y_partner
        return [VertexRef.x(i) for i in range(g.x_count) if i not in xp] + [
            VertexRef.y(j) for j in range(g.y_count) if j not in yp
        ]

    def is_perfect(self, g: BipartiteGraph) -> bool:
        return g.x_count == g.y_count == len(self.pairs)

    def induced_subgraph(self, g: BipartiteGraph) -> tuple[BipartiteGraph, list[int], list[int]]:
        """``G[M]``: the subgraph induced by the saturated vertices."""
        return g.induced(self.x_partner, self.y_partner)


class MatchingCheck(NamedTuple):
    valid: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.valid


def is_valid_matching(g: BipartiteGraph, pairs: Iterable[Edge]) -> MatchingCheck:
    """Check a candidate pair set against ``g``; reports the first violation."""
    seen_x: set[int] = set()
    seen_y: set[int] = set()
    for x, y in pairs:
        if not g.has_edge(x, y):
            return MatchingCheck(False, f"(x{x + 1},y{y + 1}) is not an edge of the graph")
        if x in seen_x:
            return MatchingCheck(False, f"vertex x{x + 1} is shared by two pairs")
        if y in seen_y:
            return MatchingCheck(False, f"vertex y{y + 1} is shared by two pairs")
        seen_x.add(x)
        seen_y.add(y)
    return MatchingCheck(True)


def require_valid(g: BipartiteGraph, m: Matching) -> None:
    if len(m) > 1024:
        _require_valid_bulk(g, m)
        return
    for x, y in m.pairs:
        if not g.has_edge(x, y):
            raise InvalidMatchingError(f"(x{x + 1},y{y + 1}) is not an edge of the graph")


def _require_valid_bulk(g: BipartiteGraph, m: Matching) -> None:
    hit = g.has_edges(m.pair_array)
    if not hit.all():
        x, y = m.pair_array[~hit][0].tolist()
        raise InvalidMatchingError(f"(x{x + 1},y{y + 1}) is not an edge of the graph")


def _hopcroft_karp(adj: list[list[int]] | tuple, mate_x: list[int], mate_y: list[int]) -> None:
    """Augment ``mate_x``/``mate_y`` in place to a maximum matching.

    Phase structure: BFS layering from free X vertices, then an iterative DFS
    per free root restricted to the layers. Roots and neighbours are scanned in
    ascending index order.
    """
    n = len(adj)
    while True:
        dist = [-1] * n
        queue = [x for x in range(n) if mate_x[x] == UNMATCHED]
        for x in queue:
            dist[x] = 0
        found = False
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            nd = dist[x] + 1
            for y in adj[x]:
                x2 = mate_y[y]
                if x2 == UNMATCHED:
                    found = True
                elif dist[x2] == -1:
                    dist[x2] = nd
                    queue.append(x2)
        if not found:
            return
        ptr = [0] * n
        for root in range(n):
            if mate_x[root] != UNMATCHED:
                continue
            stack = [root]
            while stack:
                x = stack[-1]
                nbrs = adj[x]
                if ptr[x] < len(nbrs):
                    y = nbrs[ptr[x]]
                    ptr[x] += 1
                    x2 = mate_y[y]
                    if x2 == UNMATCHED:
                        for xs in stack:
                            ys = adj[xs][ptr[xs] - 1]
                            mate_x[xs] = ys
                            mate_y[ys] = xs
                        break
                    if dist[x2] == dist[x] + 1:
                        stack.append(x2)
                else:
                    dist[x] = -2
                    stack.pop()


def _to_matching(mate_x: list[int]) -> Matching:
    return Matching(tuple((x, y) for x, y in enumerate(mate_x) if y != UNMATCHED))


def maximum_matching(g: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching by Hopcroft-Karp, ``O(E sqrt(V))``."""
    mate_x = [UNMATCHED] * g.x_count
    mate_y = [UNMATCHED] * g.y_count
    _hopcroft_karp(g.x_adj, mate_x, mate_y)
    return _to_matching(mate_x)


def greedy_matching(g: BipartiteGraph) -> Matching:
    """Maximum matching that first takes every edge forced by a degree-1 vertex.

    While the residual graph has a vertex of degree 1, its only edge is matched
    and both endpoints are deleted. Pending degree-1 vertices live on a
    stack: the initial ones are popped in index order (X side first), and a
    vertex whose degree drops to 1 is handled before older entries, the last
    one discovered first. Whatever remains is completed to
    maximum cardinality by Hopcroft-Karp on the residual graph, which leaves
    the forced edges untouched.
    """
    alive_x = [True] * g.x_count
    alive_y = [True] * g.y_count
    deg_x = [len(a) for a in g.x_adj]
    deg_y = [len(a) for a in g.y_adj]
    mate_x = [UNMATCHED] * g.x_count
    mate_y = [UNMATCHED] * g.y_count

    seeds = [(0, x) for x in range(g.x_count) if deg_x[x] == 1]
    seeds += [(1, y) for y in range(g.y_count) if deg_y[y] == 1]
    stack = seeds[::-1]
    while stack:
        side, v = stack.pop()
        if side == 0:
            if not alive_x[v] or deg_x[v] != 1:
                continue
            u = next(y for y in g.x_adj[v] if alive_y[y])
            x, y = v, u
        else:
            if not alive_y[v] or deg_y[v] != 1:
                continue
            u = next(x for x in g.y_adj[v] if alive_x[x])
            x, y = u, v
        mate_x[x], mate_y[y] = y, x
        alive_x[x] = alive_y[y] = False
        for w in g.y_adj[y]:
            if alive_x[w]:
                deg_x[w] -= 1
                if deg_x[w] == 1:
                    stack.append((0, w))
        for w in g.x_adj[x]:
            if alive_y[w]:
                deg_y[w] -= 1
                if deg_y[w] == 1:
                    stack.append((1, w))

    residual = [[y for y in g.x_adj[x] if alive_y[y]] if alive_x[x] else [] for x in range(g.x_count)]
    _hopcroft_karp(residual, mate_x, mate_y)
    return _to_matching(mate_x)


def is_maximum(g: BipartiteGraph, m: Matching) -> bool:
    return len(m) == len(maximum_matching(g))


def konig_cover(g: BipartiteGraph, m: Matching) -> list[VertexRef]:
    """Vertex cover of size ``|m|`` when ``m`` is maximum (Konig's theorem).

    Serves as the maximality certificate: any cover bounds every matching.

    Raises:
        NotMaximumError: an augmenting path exists.
    """
    xp, yp = m.x_partner, m.y_partner
    seen_x = [False] * g.x_count
    seen_y = [False] * g.y_count
    stack = [x for x in range(g.x_count) if x not in xp]
    for x in stack:
        seen_x[x] = True
    while stack:
        x = stack.pop()
        for y in g.x_adj[x]:
            if seen_y[y] or xp.get(x) == y:
                continue
            seen_y[y] = True
            if y not in yp:
                raise NotMaximumError(f"augmenting path ends at free vertex y{y + 1}")
            x2 = yp[y]
            if not seen_x[x2]:
                seen_x[x2] = True
                stack.append(x2)
    cover = [VertexRef.x(x) for x in range(g.x_count) if not seen_x[x]]
    cover += [VertexRef.y(y) for y in range(g.y_count) if seen_y[y]]
    return cover


def enumerate_maximum_matchings(g: BipartiteGraph, budget: OracleBudget = DEFAULT_BUDGET) -> list[Matching]:
    """Every maximum matching of ``g`` exactly once, sorted by pair list.

    Exhaustive backtracking over edge subsets in edge order, pruned when the
    remaining edges cannot reach the maximum size. Guarded by
    ``budget.max_edges`` (default 24 edges) and ``budget.time_cap``.
    """
    budget.check_edges(len(g.edges))
    target = len(maximum_matching(g))
    if target == 0:
        return [Matching()]
    edges = g.edges
    total = len(edges)
    used_x = [False] * g.x_count
    used_y = [False] * g.y_count
    chosen: list[Edge] = []
    found: list[Matching] = []
    clock = budget.clock()

    def extend(i: int) -> None:
        clock.tick()
        if len(chosen) == target:
            found.append(Matching(tuple(chosen)))
            return
        if len(chosen) + (total - i) < target:
            return
        for k in range(i, total):
            if len(chosen) + (total - k) < target:
                return
            x, y = edges[k]
            if used_x[x] or used_y[y]:
                continue
            used_x[x] = used_y[y] = True
            chosen.append(edges[k])
            extend(k + 1)
            chosen.pop()
            used_x[x] = used_y[y] = False

    extend(0)
    found.sort(key=lambda m: m.pairs)
    return found


def enumerate_perfect_matchings(g: BipartiteGraph, budget: OracleBudget = DEFAULT_BUDGET) -> list[Matching]:
    """Every perfect matching of ``g``, in lexicographic order.

    Assigns X vertices in index order to unused neighbours; empty when the
    sides differ in size. Guarded by ``budget.max_nodes`` on ``|X|`` and by
    ``budget.time_cap``.
    """
    if g.x_count != g.y_count:
        return []
    budget.check_nodes(g.x_count)
    n = g.x_count
    used_y = [False] * n
    assign = [UNMATCHED] * n
    found: list[Matching] = []
    clock = budget.clock()

    def place(x: int) -> None:
        clock.tick()
        if x == n:
            found.append(Matching(tuple(enumerate(assign))))
            return
        for y in g.x_adj[x]:
            if not used_y[y]:
                used_y[y] = True
                assign[x] = y
                place(x + 1)
                used_y[y] = False
        assign[x] = UNMATCHED

    place(0)
    return found


def parse_matching(text: str, g: BipartiteGraph | None = None) -> Matching:
    """Parse ``m <x> <y>`` lines; with ``g`` given, indices are range-checked."""
    fast = _parse_matching_fast(text, g)
    if fast is not None:
        return fast
    pairs: list[Edge] = []
    seen_x: dict[int, int] = {}
    seen_y: dict[int, int] = {}
    for lineno, parts in _content_lines(text):
        if parts[0] != "m" or len(parts) != 3:
            raise GraphFormatError("expected matching line 'm <x> <y>'", lineno)
        x, y = _int_field(parts[1], lineno), _int_field(parts[2], lineno)
        if x < 1 or y < 1:
            raise GraphFormatError("indices are 1-based", lineno)
        if g is not None and (x > g.x_count or y > g.y_count):
            raise GraphFormatError(f"pair ({x}, {y}) out of range for the graph", lineno)
        if x in seen_x:
            raise GraphFormatError(f"x{x} already matched on line {seen_x[x]}", lineno)
        if y in seen_y:
            raise GraphFormatError(f"y{y} already matched on line {seen_y[y]}", lineno)
        seen_x[x] = seen_y[y] = lineno
        pairs.append((x - 1, y - 1))
    return Matching(tuple(pairs))


def _parse_matching_fast(text: str, g: BipartiteGraph | None) -> Matching | None:
    scanned = scan_records(text, 2, "m")
    if scanned is None:
        return None
    arr = scanned[1] - 1
    if arr.size and arr.min() < 0:
        return None
    if g is not None and arr.size and (arr[:, 0].max() >= g.x_count or arr[:, 1].max() >= g.y_count):
        return None
    if np.unique(arr[:, 0]).size != len(arr) or np.unique(arr[:, 1]).size != len(arr):
        return None
    arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
    m = Matching._trusted(tuple(zip(arr[:, 0].tolist(), arr[:, 1].tolist())))
    m.__dict__["pair_array"] = arr
    return m


def format_matching(m: Matching) -> str:
    return "".join(f"m {x + 1} {y + 1}\n" for x, y in m.pairs)
