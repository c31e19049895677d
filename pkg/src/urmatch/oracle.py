"""Brute-force ground truth.

Nothing here touches the digraph code: perfect matchings are counted by
backtracking over X vertices and alternating cycles are found by a DFS over
alternating walks in the graph itself.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .budget import DEFAULT_BUDGET, OracleBudget
from .graph import BipartiteGraph, Edge
from .matching import Matching, require_valid

__all__ = [
    "OracleBudget",
    "DEFAULT_BUDGET",
    "count_perfect_matchings",
    "count_perfect_matchings_containing",
    "find_alternating_cycle",
]


def count_perfect_matchings(g: BipartiteGraph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Exact number of perfect matchings.

    X vertices are assigned in index order; the count of completions is
    memoised on (next X vertex, set of used Y vertices).
    """
    if g.x_count != g.y_count:
        return 0
    budget.check_nodes(g.x_count)
    n = g.x_count
    adj = g.x_adj
    clock = budget.clock()

    @lru_cache(maxsize=None)
    def completions(x: int, used: int) -> int:
        clock.tick()
        if x == n:
            return 1
        total = 0
        for y in adj[x]:
            bit = 1 << y
            if not used & bit:
                total += completions(x + 1, used | bit)
        return total

    return completions(0, 0)


def count_perfect_matchings_containing(
    g: BipartiteGraph, forced: Iterable[Edge], budget: OracleBudget = DEFAULT_BUDGET
) -> int:
    """Number of perfect matchings of ``g`` that contain every edge of ``forced``."""
    forced = list(forced)
    fx = {x for x, _ in forced}
    fy = {y for _, y in forced}
    if len(fx) != len(forced) or len(fy) != len(forced) or not all(g.has_edge(x, y) for x, y in forced):
        return 0
    rest, _, _ = g.induced(
        (x for x in range(g.x_count) if x not in fx),
        (y for y in range(g.y_count) if y not in fy),
    )
    return count_perfect_matchings(rest, budget)


def find_alternating_cycle(
    g: BipartiteGraph, m: Matching, budget: OracleBudget = DEFAULT_BUDGET
) -> list[Edge] | None:
    """An even simple cycle alternating between ``m`` and non-``m`` edges, or None.

    The cycle is returned as ``[(x0, y0), (x0, y1), (x1, y1), ..., (xk, y0)]``:
    matching edges at even positions. Cycles are searched with the smallest X
    vertex as anchor, trying anchors and neighbours in ascending order, so the
    output is deterministic. Worst case exponential; guarded by
    ``budget.max_nodes`` on ``|m|`` and by ``budget.time_cap``.
    """
    require_valid(g, m)
    budget.check_nodes(len(m))
    xp, yp = m.x_partner, m.y_partner
    clock = budget.clock()

    for x0, y0 in m.pairs:
        # walk: leave x via a non-matching edge to a saturated y, return along y's matching edge
        path: list[Edge] = [(x0, y0)]
        on_path = {x0}
        stack = [iter(g.x_adj[x0])]
        xs = [x0]
        while stack:
            clock.tick()
            x = xs[-1]
            y = next(stack[-1], None)
            if y is None:
                stack.pop()
                on_path.discard(xs.pop())
                if path and len(path) > 1:
                    path.pop()
                    path.pop()
                continue
            if y == xp[x] or y not in yp:
                continue
            x2 = yp[y]
            if y == y0 and len(xs) >= 2:
                return path + [(x, y)]
            if x2 in on_path or x2 < x0:
                continue
            path.append((x, y))
            path.append((x2, y))
            on_path.add(x2)
            xs.append(x2)
            stack.append(iter(g.x_adj[x2]))
    return None

