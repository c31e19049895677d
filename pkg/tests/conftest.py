"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import itertools
import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from urmatch.graph import BipartiteGraph
from urmatch.matching import Matching

DATA = Path(__file__).parent / "data"
GOLDENS = Path(__file__).parent / "goldens"

settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=2000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def bipartite_graphs(draw, max_x: int = 5, max_y: int = 5, min_side: int = 0) -> BipartiteGraph:
    nx_ = draw(st.integers(min_side, max_x))
    ny_ = draw(st.integers(min_side, max_y))
    cells = [(x, y) for x in range(nx_) for y in range(ny_)]
    chosen = draw(st.lists(st.sampled_from(cells), unique=True) if cells else st.just([]))
    return BipartiteGraph(nx_, ny_, tuple(chosen))


@st.composite
def graphs_with_matching(draw, max_x: int = 5, max_y: int = 5) -> tuple[BipartiteGraph, Matching]:
    """A graph and an arbitrary (not necessarily maximum) matching of it."""
    g = draw(bipartite_graphs(max_x, max_y))
    order = draw(st.permutations(g.edges)) if g.edges else []
    used_x: set[int] = set()
    used_y: set[int] = set()
    pairs = []
    for x, y in order:
        if x in used_x or y in used_y or not draw(st.booleans()):
            continue
        used_x.add(x)
        used_y.add(y)
        pairs.append((x, y))
    return g, Matching(tuple(pairs))


def all_matchings(g: BipartiteGraph):
    """Every matching of ``g`` (including the empty one), by edge subsets."""
    for r in range(min(g.x_count, g.y_count) + 1):
        for combo in itertools.combinations(g.edges, r):
            if len({x for x, _ in combo}) == r and len({y for _, y in combo}) == r:
                yield Matching(combo)


def run_cli(*args: str, cwd: Path | None = None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "urmatch", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


@pytest.fixture
def data() -> Path:
    return DATA


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
