from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import BudgetExceeded


@dataclass(frozen=True)
class OracleBudget:
    """Caps for the exponential routines.

    ``max_edges`` bounds edge-subset backtracking, ``max_nodes`` bounds
    vertex- or node-subset searches and ``time_cap`` is wall-clock seconds per
    call.
    """

    max_edges: int = 24
    max_nodes: int = 20
    time_cap: float = 10.0

    def __post_init__(self):
        if self.max_edges <= 0 or self.max_nodes <= 0 or self.time_cap <= 0:
            raise ValueError("all budget caps must be positive")

    def check_edges(self, count: int) -> None:
        if count > self.max_edges:
            raise BudgetExceeded("max_edges", self.max_edges, count)

    def check_nodes(self, count: int) -> None:
        if count > self.max_nodes:
            raise BudgetExceeded("max_nodes", self.max_nodes, count)

    def clock(self) -> Deadline:
        return Deadline(self.time_cap)


DEFAULT_BUDGET = OracleBudget()


class Deadline:
    """Cheap wall-clock guard for tight backtracking loops."""

    __slots__ = ("cap", "_end", "_ticks")

    def __init__(self, cap: float):
        self.cap = cap
        self._end = time.monotonic() + cap
        self._ticks = 0

    def tick(self) -> None:
        self._ticks += 1
        if self._ticks & 0x3FF == 0 and time.monotonic() > self._end:
            raise BudgetExceeded("time_cap", self.cap, round(self.cap + time.monotonic() - self._end, 3))
