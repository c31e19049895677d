"""Measure how well the fast all-maximum-UR conditions agree with the oracle.

Graphs come either from an exhaustive sweep over every edge subset of a fixed
``max_x x max_y`` grid or from seeded Bernoulli sampling. For each graph both
the conjunctive and the disjunctive combination of c1-c3 are compared with
:func:`~urmatch.analysis.all_max_ur_oracle`. The report keeps tallies and,
for each disagreement class, the smallest counterexample with all of its
certificates.

Report layout (YAML; ``--json`` emits the same tree)::

    summary:
      mode, max_x, max_y, edge_prob, seed, samples
      instances, evaluated, skipped
      tallies: {conjunctive: {agree, false_positive, false_negative}, disjunctive: ...}
      implication: {checked, violations}
    skipped: [{instance, reason}]
    records:
      - class: conjunctive/false-positive
        instance, occurrences
        graph: <edge-list text>
        greedy_matching: <matching text>
        conditions: {base_ur, c1, c2, c3, conjunctive, disjunctive}
        oracle: bool
        certificates: {...}
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

import numpy as np
import yaml

from .analysis import AllMaxReport, all_max_ur
from .budget import DEFAULT_BUDGET, OracleBudget
from .certificates import allmax_payload, dump_json, verify_allmax_payload
from .errors import BudgetExceeded
from .graph import BipartiteGraph, parse_graph

VARIANTS = ("conjunctive", "disjunctive")
IMPLICATION = "implication/base-not-ur-but-oracle-true"
MAX_EXHAUSTIVE_CELLS = 20


@dataclass(frozen=True)
class DiscrepancyConfig:
    max_x: int = 3
    max_y: int = 3
    exhaustive: bool = False
    edge_prob: float = 0.5
    seed: int = 0
    samples: int = 100
    budget: OracleBudget = DEFAULT_BUDGET
    workers: int = 1
    shrink: bool = True

    def __post_init__(self):
        if self.max_x < 1 or self.max_y < 1:
            raise ValueError("side caps must be at least 1")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("edge probability must lie in [0, 1]")
        if self.samples < 0:
            raise ValueError("sample count must be nonnegative")
        if self.exhaustive and self.max_x * self.max_y > MAX_EXHAUSTIVE_CELLS:
            raise ValueError(f"exhaustive sweep limited to {MAX_EXHAUSTIVE_CELLS} vertex pairs")


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for instance ``index``; scheduling cannot change it."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def random_graph(rng: np.random.Generator, max_x: int, max_y: int, edge_prob: float) -> BipartiteGraph:
    nx_ = int(rng.integers(1, max_x + 1))
    ny_ = int(rng.integers(1, max_y + 1))
    mask = rng.random((nx_, ny_)) < edge_prob
    return BipartiteGraph(nx_, ny_, tuple((int(x), int(y)) for x, y in zip(*np.nonzero(mask))))


def generate(config: DiscrepancyConfig) -> Iterator[tuple[int, BipartiteGraph]]:
    if config.exhaustive:
        cells = [(x, y) for x in range(config.max_x) for y in range(config.max_y)]
        for mask in range(1 << len(cells)):
            edges = tuple(c for b, c in enumerate(cells) if mask >> b & 1)
            yield mask, BipartiteGraph(config.max_x, config.max_y, edges)
    else:
        for i in range(config.samples):
            yield i, random_graph(instance_rng(config.seed, i), config.max_x, config.max_y, config.edge_prob)


def classify(r: AllMaxReport) -> list[str]:
    """Disagreement classes of one oracle-backed report (empty when all agree)."""
    out = []
    for variant in VARIANTS:
        fast = getattr(r, f"fast_verdict_{variant}")
        if fast and not r.oracle_verdict:
            out.append(f"{variant}/false-positive")
        elif not fast and r.oracle_verdict:
            out.append(f"{variant}/false-negative")
    if not r.base_is_ur and r.oracle_verdict:
        out.append(IMPLICATION)
    return out


def size_key(g: BipartiteGraph) -> tuple:
    return (len(g.edges), g.x_count + g.y_count, g.x_count, g.y_count, tuple(sorted(g.edges)))


@dataclass
class Tally:
    agree: int = 0
    false_positive: int = 0
    false_negative: int = 0


@dataclass
class Record:
    cls: str
    instance: int
    graph: BipartiteGraph
    report: AllMaxReport
    occurrences: int = 1


@dataclass
class DiscrepancyReport:
    config: DiscrepancyConfig
    instances: int = 0
    evaluated: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)
    tallies: dict[str, Tally] = field(default_factory=lambda: {v: Tally() for v in VARIANTS})
    implication_checked: int = 0
    implication_violations: int = 0
    records: dict[str, Record] = field(default_factory=dict)

    @property
    def all_agree(self) -> bool:
        return not self.records and not self.skipped

    def add(self, index: int, g: BipartiteGraph, r: AllMaxReport) -> None:
        self.evaluated += 1
        for variant in VARIANTS:
            fast = getattr(r, f"fast_verdict_{variant}")
            t = self.tallies[variant]
            if fast == r.oracle_verdict:
                t.agree += 1
            elif fast:
                t.false_positive += 1
            else:
                t.false_negative += 1
        if not r.base_is_ur:
            self.implication_checked += 1
            self.implication_violations += bool(r.oracle_verdict)
        for cls in classify(r):
            old = self.records.get(cls)
            if old is None:
                self.records[cls] = Record(cls, index, g, r)
            else:
                old.occurrences += 1
                if (size_key(g), index) < (size_key(old.graph), old.instance):
                    self.records[cls] = Record(cls, index, g, r, old.occurrences)

    def to_dict(self) -> dict[str, Any]:
        c = self.config
        summary = {
            "mode": "exhaustive" if c.exhaustive else "random",
            "max_x": c.max_x,
            "max_y": c.max_y,
            "edge_prob": None if c.exhaustive else c.edge_prob,
            "seed": None if c.exhaustive else c.seed,
            "samples": None if c.exhaustive else c.samples,
            "instances": self.instances,
            "evaluated": self.evaluated,
            "skipped": len(self.skipped),
            "tallies": {v: vars(t).copy() for v, t in self.tallies.items()},
            "implication": {
                "statement": "greedy matching not UR implies oracle false",
                "checked": self.implication_checked,
                "violations": self.implication_violations,
            },
        }
        records = []
        for cls in sorted(self.records):
            rec = self.records[cls]
            records.append(
                {"class": cls, "instance": rec.instance, "occurrences": rec.occurrences}
                | allmax_payload(rec.graph, rec.report)
            )
        return {
            "summary": summary,
            "skipped": [{"instance": i, "reason": why} for i, why in self.skipped],
            "records": records,
        }

    def to_yaml(self) -> str:
        return dump_yaml(self.to_dict())

    def to_json(self) -> str:
        return dump_json(self.to_dict()) + "\n"


class _Dumper(yaml.SafeDumper):
    pass


def _str_representer(dumper: yaml.SafeDumper, data: str):
    style = "|" if "\n" in data else None
    return dumper.represent_scalar("tag:yaml.org,2002:str", data, style=style)


_Dumper.add_representer(str, _str_representer)


def dump_yaml(tree: Any) -> str:
    return yaml.dump(tree, Dumper=_Dumper, sort_keys=False, default_flow_style=None, width=100)


def _evaluate(args: tuple[int, BipartiteGraph, OracleBudget]) -> tuple[int, BipartiteGraph, AllMaxReport | str]:
    index, g, budget = args
    try:
        return index, g, all_max_ur(g, oracle=True, budget=budget)
    except BudgetExceeded as exc:
        return index, g, str(exc)


def shrink(g: BipartiteGraph, keeps: Callable[[BipartiteGraph], bool]) -> BipartiteGraph:
    """Greedily drop edges, then trailing isolated vertices, while ``keeps`` holds."""
    changed = True
    while changed:
        changed = False
        for i in range(len(g.edges)):
            cand = BipartiteGraph(g.x_count, g.y_count, g.edges[:i] + g.edges[i + 1:])
            if keeps(cand):
                g, changed = cand, True
                break
    for side in ("x", "y"):
        while True:
            nx_ = g.x_count - (side == "x")
            ny_ = g.y_count - (side == "y")
            if min(nx_, ny_) < 1 or any(x >= nx_ or y >= ny_ for x, y in g.edges):
                break
            cand = BipartiteGraph(nx_, ny_, g.edges)
            if not keeps(cand):
                break
            g = cand
    return g


def discrepancy_search(config: DiscrepancyConfig) -> DiscrepancyReport:
    """Run the comparison; instances hitting a budget are recorded as skipped."""
    report = DiscrepancyReport(config)
    jobs = ((i, g, config.budget) for i, g in generate(config))
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=64))
    else:
        results = map(_evaluate, jobs)
    for index, g, outcome in results:
        report.instances += 1
        if isinstance(outcome, str):
            report.skipped.append((index, outcome))
        else:
            report.add(index, g, outcome)
    report.skipped.sort()
    if config.shrink and not config.exhaustive:
        for cls, rec in report.records.items():

            def keeps(h: BipartiteGraph, cls=cls) -> bool:
                try:
                    return cls in classify(all_max_ur(h, oracle=True, budget=config.budget))
                except BudgetExceeded:
                    return False

            small = shrink(rec.graph, keeps)
            if small != rec.graph:
                rec.graph = small
                rec.report = all_max_ur(small, oracle=True, budget=config.budget)
    return report


def load_report(text: str) -> dict[str, Any]:
    return json.loads(text) if text.lstrip().startswith("{") else yaml.safe_load(text)


def verify_report(tree: dict[str, Any]) -> dict[str, list[str]]:
    """Replay every record's certificates; maps record class to its problems."""
    problems: dict[str, list[str]] = {}
    for rec in tree.get("records") or []:
        cls = rec["class"]
        try:
            errs = verify_allmax_payload(rec)
        except (KeyError, ValueError, TypeError) as exc:
            errs = [f"malformed record: {exc}"]
        cond, oracle = rec["conditions"], rec["oracle"]
        variant, _, kind = cls.partition("/")
        if variant in VARIANTS:
            fast = cond[variant]
            expect = (True, False) if kind == "false-positive" else (False, True)
            if (fast, oracle) != expect:
                errs.append(f"record values do not match class {cls}")
        elif cls == IMPLICATION and not (cond["base_ur"] is False and oracle is True):
            errs.append(f"record values do not match class {cls}")
        problems[cls] = errs
    return problems


def record_graph(rec: dict[str, Any]) -> BipartiteGraph:
    return parse_graph(rec["graph"])
