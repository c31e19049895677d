"""BD-mapping digraphs of a matching and their acyclicity certificates.

Each matching edge ``i = (x_i, y_i)`` becomes node ``i`` (its position in the
sorted pair list). A non-matching edge ``(x_i, y_j)`` whose endpoints are both
saturated becomes the arc ``i -> j``. Directed cycles are exactly alternating
cycles of the source graph, so the matching is uniquely restricted iff the
digraph is acyclic.

The extended digraph adds one node per free vertex. A free X vertex ``u``
gets ``u -> j`` for each edge ``(u, y_j)``; a free Y vertex ``w`` gets
``i -> w`` for each edge ``(x_i, w)``. A directed path that starts at a free
node therefore traces an alternating path of the graph that leaves the free
vertex along a non-matching edge.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CyclicDigraphError, InvalidCycleError, NotMaximumError
from .graph import BipartiteGraph, Edge, VertexRef
from .matching import Matching, maximum_matching, require_valid

Arc = tuple[int, int]

#: path counts saturate here; 2 means "two or more"
MANY = 2


class Digraph:
    """Directed graph on integer nodes, arcs kept as parallel numpy arrays.

    ``arcs`` (a tuple of pairs) and the adjacency lists are derived lazily,
    so large digraphs only pay for what the caller touches.
    """

    def __init__(self, nodes: Sequence[int], arcs: Iterable[Arc] = (), *, src=None, dst=None):
        self.nodes = tuple(nodes)
        if src is None:
            flat = np.fromiter(itertools.chain.from_iterable(arcs), dtype=np.int64)
            src, dst = flat[0::2], flat[1::2]
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.nodes == other.nodes and self.arcs == other.arcs

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(nodes={len(self.nodes)}, arcs={len(self.src)})"

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(zip(self.src.tolist(), self.dst.tolist()))

    @cached_property
    def _size(self) -> int:
        return max(self.nodes) + 1 if self.nodes else 0

    def _csr(self, key: np.ndarray, val: np.ndarray) -> tuple[list[int], list[int]]:
        # unique composite keys make the fast unstable sort reproduce a stable one
        perm = np.argsort(key * max(len(key), 1) + np.arange(len(key)))
        indptr = np.zeros(self._size + 1, dtype=np.int64)
        np.cumsum(np.bincount(key, minlength=self._size), out=indptr[1:])
        return indptr.tolist(), val[perm].tolist()

    @cached_property
    def out_csr(self) -> tuple[list[int], list[int]]:
        """``(indptr, heads)``: successors of ``v`` are ``heads[indptr[v]:indptr[v+1]]``."""
        return self._csr(self.src, self.dst)

    @cached_property
    def in_csr(self) -> tuple[list[int], list[int]]:
        return self._csr(self.dst, self.src)

    @cached_property
    def successors(self) -> list[list[int]]:
        indptr, heads = self.out_csr
        return [heads[indptr[v]:indptr[v + 1]] for v in range(self._size)]

    @cached_property
    def predecessors(self) -> list[list[int]]:
        indptr, tails = self.in_csr
        return [tails[indptr[v]:indptr[v + 1]] for v in range(self._size)]

    @cached_property
    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    def without(self, removed: Iterable[int]) -> Digraph:
        """Copy with the given nodes and their incident arcs deleted."""
        gone = set(removed)
        keep = ~(np.isin(self.src, list(gone)) | np.isin(self.dst, list(gone)))
        return Digraph(tuple(v for v in self.nodes if v not in gone), src=self.src[keep], dst=self.dst[keep])

    def label(self, node: int) -> str:
        return f"n{node + 1}"


class BDDigraph(Digraph):
    def __init__(self, matching: Matching, *, src, dst):
        super().__init__(range(len(matching)), src=src, dst=dst)
        self.matching = matching

    def label(self, node: int) -> str:
        x, y = self.matching.pairs[node]
        return f"(x{x + 1},y{y + 1})"


class ExtendedBDDigraph(Digraph):
    """Core BD digraph on nodes ``0..k-1`` plus free nodes ``k..k+f-1``."""

    def __init__(self, core: BDDigraph, free_nodes: Sequence[VertexRef], boundary_arcs: Sequence[Arc]):
        self.core = core
        self.free_nodes = tuple(free_nodes)
        self.boundary_arcs = tuple(boundary_arcs)
        b = np.array(self.boundary_arcs, dtype=np.int64).reshape(-1, 2)
        super().__init__(
            range(len(core.nodes) + len(self.free_nodes)),
            src=np.concatenate([core.src, b[:, 0]]),
            dst=np.concatenate([core.dst, b[:, 1]]),
        )

    @property
    def core_count(self) -> int:
        return len(self.core.nodes)

    def is_free(self, node: int) -> bool:
        return node >= self.core_count

    def free_vertex(self, node: int) -> VertexRef:
        return self.free_nodes[node - self.core_count]

    def node_of(self, v: VertexRef) -> int:
        return self.core_count + self.free_nodes.index(v)

    def label(self, node: int) -> str:
        if self.is_free(node):
            return self.free_vertex(node).name
        return self.core.label(node)


def _node_maps(g: BipartiteGraph, m: Matching) -> tuple[np.ndarray, np.ndarray]:
    node_x = np.full(g.x_count, -1, dtype=np.int64)
    node_y = np.full(g.y_count, -1, dtype=np.int64)
    if len(m):
        pairs = m.pair_array
        node_x[pairs[:, 0]] = np.arange(len(m))
        node_y[pairs[:, 1]] = np.arange(len(m))
    return node_x, node_y


def bd_map(g: BipartiteGraph, m: Matching) -> BDDigraph:
    """BD-mapping digraph of ``m``; arcs follow the graph's edge order.

    Raises:
        InvalidMatchingError: ``m`` uses a pair that is not an edge of ``g``.
    """
    require_valid(g, m)
    node_x, node_y = _node_maps(g, m)
    e = g.edge_array
    i = node_x[e[:, 0]]
    j = node_y[e[:, 1]]
    # i == j is the matching edge itself
    keep = (i >= 0) & (j >= 0) & (i != j)
    return BDDigraph(m, src=i[keep], dst=j[keep])


def extended_bd_map(g: BipartiteGraph, m: Matching) -> ExtendedBDDigraph:
    """BD digraph of a maximum matching extended by its free vertices.

    Raises:
        InvalidMatchingError: ``m`` is not a matching of ``g``.
        NotMaximumError: ``m`` is not of maximum cardinality.
    """
    core = bd_map(g, m)
    if len(m) != len(maximum_matching(g)):
        raise NotMaximumError(f"matching of size {len(m)} is not maximum")
    node_x, node_y = _node_maps(g, m)
    free = tuple(m.free_vertices(g))
    k = len(m)
    free_id = {v: k + t for t, v in enumerate(free)}
    boundary = []
    for (x, y), i, j in zip(g.edges, node_x[g.edge_array[:, 0]].tolist(), node_y[g.edge_array[:, 1]].tolist()):
        if i < 0 and j >= 0:
            boundary.append((free_id[VertexRef.x(x)], j))
        elif i >= 0 and j < 0:
            boundary.append((i, free_id[VertexRef.y(y)]))
        elif i < 0 and j < 0:  # pragma: no cover - excluded by maximality
            raise NotMaximumError(f"edge (x{x + 1},y{y + 1}) joins two free vertices")
    return ExtendedBDDigraph(core, free, boundary)


class Verdict(enum.Enum):
    ACYCLIC = "acyclic"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class AcyclicityCertificate:
    verdict: Verdict
    topological_order: tuple[int, ...] | None = None
    cycle: tuple[int, ...] | None = None

    @property
    def acyclic(self) -> bool:
        return self.verdict is Verdict.ACYCLIC

    def check(self, d: Digraph) -> bool:
        """Re-validate the certificate against ``d`` by direct inspection."""
        if self.acyclic:
            order = self.topological_order
            if order is None or sorted(order) != sorted(d.nodes):
                return False
            pos = {v: p for p, v in enumerate(order)}
            return all(pos[i] < pos[j] for i, j in d.arcs)
        cyc = self.cycle
        if not cyc or len(set(cyc)) != len(cyc):
            return False
        arcs = d.arc_set
        return all((cyc[t], cyc[(t + 1) % len(cyc)]) in arcs for t in range(len(cyc)))


def acyclicity_certificate(d: Digraph) -> AcyclicityCertificate:
    """Topological order (Kahn, FIFO, lowest node first) or a directed cycle.

    When Kahn's algorithm stalls, every remaining node still has a remaining
    predecessor; walking lowest-numbered remaining predecessors backwards
    from the lowest remaining node must revisit a node, which closes the
    returned cycle. The cycle is rotated to start at its smallest node.
    """
    indptr, heads = d.out_csr
    indeg = np.bincount(d.dst, minlength=len(indptr) - 1).tolist()
    order = [v for v in d.nodes if indeg[v] == 0]
    append = order.append
    # iterating a list while appending to it is a FIFO queue
    for v in order:
        for w in heads[indptr[v]:indptr[v + 1]]:
            indeg[w] -= 1
            if not indeg[w]:
                append(w)
    if len(order) == len(d.nodes):
        return AcyclicityCertificate(Verdict.ACYCLIC, topological_order=tuple(order))

    done = set(order)
    indptr, tails = d.in_csr
    start = min(v for v in d.nodes if v not in done)
    walk_pos: dict[int, int] = {}
    walk: list[int] = []
    v = start
    while v not in walk_pos:
        walk_pos[v] = len(walk)
        walk.append(v)
        v = min(u for u in tails[indptr[v]:indptr[v + 1]] if u not in done)
    back = walk[walk_pos[v]:]
    cycle = back[::-1]
    r = cycle.index(min(cycle))
    return AcyclicityCertificate(Verdict.CYCLIC, cycle=tuple(cycle[r:] + cycle[:r]))


def cycle_to_alternating_cycle(g: BipartiteGraph, m: Matching, cycle: Sequence[int]) -> list[Edge]:
    """Unwrap a directed cycle of ``bd_map(g, m)`` into an alternating cycle of ``g``.

    Node ``i`` contributes its matching edge ``(x_i, y_i)`` and the arc
    ``i -> j`` contributes the non-matching edge ``(x_i, y_j)``, giving
    ``2 * len(cycle)`` edges that alternate in and out of ``m``.

    Raises:
        InvalidCycleError: ``cycle`` is not a directed cycle of the digraph.
    """
    k = len(cycle)
    if k < 2:
        raise InvalidCycleError("a cycle needs at least two nodes")
    if len(set(cycle)) != k:
        raise InvalidCycleError("cycle repeats a node")
    pairs = m.pairs
    if any(not 0 <= i < len(pairs) for i in cycle):
        raise InvalidCycleError("cycle names a node outside the digraph")
    nxt = [cycle[(t + 1) % k] for t in range(k)]
    arcs = np.stack((m.pair_array[list(cycle), 0], m.pair_array[nxt, 1]), axis=1)
    missing = np.flatnonzero(~g.has_edges(arcs))
    if missing.size:
        t = int(missing[0])
        raise InvalidCycleError(f"no arc {cycle[t] + 1} -> {nxt[t] + 1}")
    edges: list[Edge] = []
    for t in range(k):
        xi, yi = pairs[cycle[t]]
        _, yj = pairs[nxt[t]]
        edges.append((xi, yi))
        edges.append((xi, yj))
    return edges


def _require_order(d: Digraph) -> tuple[int, ...]:
    cert = acyclicity_certificate(d)
    if not cert.acyclic:
        raise CyclicDigraphError(f"digraph has a cycle through nodes {[v + 1 for v in cert.cycle]}")
    return cert.topological_order


def path_counts_from(d: Digraph, source: int, order: Sequence[int] | None = None) -> dict[int, int]:
    """Saturating (0/1/2+) path counts from ``source`` to every node it reaches.

    The empty path counts, so ``source`` maps to 1.
    """
    if order is None:
        order = _require_order(d)
    counts = {source: 1}
    succ = d.successors
    started = False
    for v in order:
        if v == source:
            started = True
        if not started or v not in counts:
            continue
        c = counts[v]
        for w in succ[v]:
            counts[w] = min(MANY, counts.get(w, 0) + c)
    return counts


def path_counts_to(d: Digraph, target: int, order: Sequence[int] | None = None) -> dict[int, int]:
    """Saturating path counts from every node that reaches ``target``."""
    if order is None:
        order = _require_order(d)
    counts = {target: 1}
    pred = d.predecessors
    started = False
    for v in reversed(order):
        if v == target:
            started = True
        if not started or v not in counts:
            continue
        c = counts[v]
        for u in pred[v]:
            counts[u] = min(MANY, counts.get(u, 0) + c)
    return counts


def count_paths(d: Digraph, source: int, target: int) -> int:
    """Number of directed paths ``source -> target``, saturated at :data:`MANY`.

    Raises:
        CyclicDigraphError: ``d`` has a directed cycle.
    """
    return path_counts_from(d, source).get(target, 0)


def two_paths(d: Digraph, source: int, target: int) -> list[list[int]]:
    """Up to two distinct directed paths ``source -> target`` in an acyclic ``d``.

    The search only enters nodes that can still reach ``target``, so every
    branch it takes ends in a path.
    """
    alive = set(path_counts_to(d, target))
    if source not in alive:
        return []
    succ = d.successors
    found: list[list[int]] = []
    path = [source]
    iters = [iter(succ[source])]
    if source == target:
        found.append([source])
    while iters and len(found) < 2:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            path.pop()
            continue
        if nxt not in alive:
            continue
        path.append(nxt)
        if nxt == target:
            found.append(list(path))
            path.pop()
        else:
            iters.append(iter(succ[nxt]))
    return found


def digraph_to_dot(d: Digraph, name: str = "D") -> str:
    """DOT rendering; core nodes are boxes, free nodes of an extended digraph circles."""
    lines = [f"digraph {name} {{"]
    for v in d.nodes:
        free = isinstance(d, ExtendedBDDigraph) and d.is_free(v)
        shape = "circle" if free else "box"
        lines.append(f'  n{v + 1} [shape={shape}, label="{d.label(v)}"];')
    for i, j in d.arcs:
        lines.append(f"  n{i + 1} -> n{j + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"

