"""Bipartite graph representation and the edge-list file format.

File format (1-based indices, ``#`` starts a comment line)::

    p bip <|X|> <|Y|> <|E|>
    e <x> <y>
    ...

Internally every index is 0-based.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError

Edge = tuple[int, int]


class Side(enum.Enum):
    X = "x"
    Y = "y"


@dataclass(frozen=True)
class VertexRef:
    side: Side
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"negative vertex index {self.index}")

    def sort_key(self) -> tuple[int, int]:
        return (0 if self.side is Side.X else 1, self.index)

    @property
    def name(self) -> str:
        return f"{self.side.value}{self.index + 1}"

    def __str__(self) -> str:
        return self.name

    @classmethod
    def x(cls, index: int) -> VertexRef:
        return cls(Side.X, index)

    @classmethod
    def y(cls, index: int) -> VertexRef:
        return cls(Side.Y, index)


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable bipartite graph ``G = (X, Y; E)``.

    Vertices on each side are ``0..count-1``; isolated vertices are allowed.
    Edge order is preserved exactly as given.
    """

    x_count: int
    y_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.x_count < 0 or self.y_count < 0:
            raise ValueError("side sizes must be nonnegative")
        edges = tuple((int(x), int(y)) for x, y in self.edges)
        object.__setattr__(self, "edges", edges)
        for x, y in edges:
            if not (0 <= x < self.x_count and 0 <= y < self.y_count):
                raise ValueError(f"edge ({x}, {y}) out of range for {self.x_count}x{self.y_count} graph")
        if len(self.edge_index) != len(edges):
            seen: set[Edge] = set()
            for e in edges:
                if e in seen:
                    raise ValueError(f"duplicate edge {e}")
                seen.add(e)

    @classmethod
    def _trusted(cls, x_count: int, y_count: int, edges: tuple[Edge, ...], edge_array: np.ndarray) -> BipartiteGraph:
        """Skip validation for edges a caller has already checked in bulk."""
        g = object.__new__(cls)
        object.__setattr__(g, "x_count", x_count)
        object.__setattr__(g, "y_count", y_count)
        object.__setattr__(g, "edges", edges)
        g.__dict__["edge_array"] = edge_array
        return g

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        """Position of each edge in :attr:`edges`."""
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as an ``(E, 2)`` int64 array."""
        flat = np.fromiter(itertools.chain.from_iterable(self.edges), dtype=np.int64, count=2 * len(self.edges))
        return flat.reshape(-1, 2)

    @cached_property
    def _edge_keys(self) -> np.ndarray:
        e = self.edge_array
        return np.sort(e[:, 0] * max(self.y_count, 1) + e[:, 1])

    def has_edges(self, pairs: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`has_edge` over an ``(n, 2)`` integer array."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        inside = (pairs >= 0).all(axis=1) & (pairs[:, 0] < self.x_count) & (pairs[:, 1] < self.y_count)
        keys = pairs[:, 0] * max(self.y_count, 1) + pairs[:, 1]
        table = self._edge_keys
        pos = np.minimum(np.searchsorted(table, keys), max(len(table) - 1, 0))
        found = table[pos] == keys if len(table) else np.zeros(len(keys), dtype=bool)
        return inside & found

    @cached_property
    def x_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.x_count)]
        for x, y in self.edges:
            adj[x].append(y)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def y_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.y_count)]
        for x, y in self.edges:
            adj[y].append(x)
        return tuple(tuple(sorted(a)) for a in adj)

    def has_edge(self, x: int, y: int) -> bool:
        return (x, y) in self.edge_index

    def neighbors(self, v: VertexRef) -> tuple[int, ...]:
        """Sorted neighbour indices (on the opposite side) of ``v``."""
        self._check_vertex(v)
        return self.x_adj[v.index] if v.side is Side.X else self.y_adj[v.index]

    def vertices(self) -> list[VertexRef]:
        return [VertexRef.x(i) for i in range(self.x_count)] + [VertexRef.y(j) for j in range(self.y_count)]

    def induced(self, xs: Iterable[int], ys: Iterable[int]) -> tuple[BipartiteGraph, list[int], list[int]]:
        """Subgraph induced by the given vertices, relabelled to 0-based.

        Returns the subgraph plus the original index of each new X and Y vertex.
        """
        xs = sorted(set(xs))
        ys = sorted(set(ys))
        xmap = {x: i for i, x in enumerate(xs)}
        ymap = {y: j for j, y in enumerate(ys)}
        sub = [(xmap[x], ymap[y]) for x, y in self.edges if x in xmap and y in ymap]
        return BipartiteGraph(len(xs), len(ys), tuple(sub)), xs, ys

    def _check_vertex(self, v: VertexRef) -> None:
        limit = self.x_count if v.side is Side.X else self.y_count
        if not 0 <= v.index < limit:
            raise IndexError(f"vertex {v} out of range")

    def __repr__(self) -> str:
        return f"BipartiteGraph(x_count={self.x_count}, y_count={self.y_count}, edges={list(self.edges)})"


def degree(g: BipartiteGraph, v: VertexRef) -> int:
    """Number of edges incident to ``v``; raises ``IndexError`` when out of range."""
    return len(g.neighbors(v))


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _int_field(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", lineno) from None


_SPACE = np.zeros(256, dtype=bool)
_SPACE[[ord(" "), ord("\t"), ord("\r"), ord("\n")]] = True
_LETTERS = np.zeros(256, dtype=bool)
_LETTERS[[ord(c) for c in "pbiem"]] = True
_ALLOWED = _SPACE | _LETTERS
_ALLOWED[ord("0"):ord("9") + 1] = True
_BLANK_WORDS = str.maketrans("pbiem", "     ")


def scan_records(text: str, width: int, tag: str, header: tuple[str, ...] = ()) -> tuple[list[str], np.ndarray] | None:
    """Vectorised reader for simple ``<tag> <int> ...`` record files.

    Returns the header tokens and an ``(n, width)`` array of the integer
    fields, or None when the text is anything but the plain layout (comments,
    unusual characters, ragged lines, huge numbers). Callers then fall back to
    the line-by-line parser, which owns all error reporting.
    """
    try:
        buf = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    except UnicodeEncodeError:
        return None
    if buf.size == 0:
        return None
    hist = np.bincount(buf, minlength=256)
    if hist[~_ALLOWED].any():
        return None
    # only whitespace sits at or below the space character once the alphabet is checked
    space = buf <= ord(" ")
    prev_space = np.concatenate(([True], space[:-1]))
    next_space = np.concatenate((space[1:], [True]))
    starts = np.flatnonzero(~space & prev_space)
    ends = np.flatnonzero(~space & next_space) + 1
    line_of = np.searchsorted(np.flatnonzero(buf == ord("\n")), starts)
    breaks = np.flatnonzero(np.diff(line_of)) + 1
    per_line = np.diff(np.concatenate(([0], breaks, [starts.size])))
    skip = len(header) + 3 if header else 0
    if header:
        if per_line.size == 0 or per_line[0] != skip:
            return None
        head = [text[a:b] for a, b in zip(starts[:skip].tolist(), ends[:skip].tolist())]
        if tuple(head[: len(header)]) != header or not all(t.isdigit() for t in head[len(header):]):
            return None
        per_line = per_line[1:]
    else:
        head = []
    if (per_line != width + 1).any():
        return None
    rec_start = starts[skip:].reshape(-1, width + 1)
    rec_end = ends[skip:].reshape(-1, width + 1)
    if ((rec_end[:, 0] - rec_start[:, 0]) != 1).any() or (buf[rec_start[:, 0]] != ord(tag)).any():
        return None
    # letters may only appear in the header words and the one-letter tags
    if hist[_LETTERS].sum() != len(rec_start) + sum(map(len, header)):
        return None
    if (ends - starts).max() > 18:
        return None
    # the layout is now known, so blank out the words and let numpy read the integers
    numbers = np.fromstring(text.translate(_BLANK_WORDS), dtype=np.int64, sep=" ")
    values = numbers[len(header) and 3:]
    if values.size != rec_start.shape[0] * width:
        return None
    return head, values.reshape(-1, width)


def parse_graph(text: str) -> BipartiteGraph:
    """Parse the ``p bip`` edge-list format into a :class:`BipartiteGraph`.

    Raises:
        GraphFormatError: malformed header or edge line, out-of-range index,
            duplicate edge or wrong edge count. The message names the line.
    """
    fast = _parse_graph_fast(text)
    if fast is not None:
        return fast
    header: tuple[int, int, int] | None = None
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    last_line = 0
    for lineno, parts in _content_lines(text):
        last_line = lineno
        if header is None:
            if len(parts) != 5 or parts[0] != "p" or parts[1] != "bip":
                raise GraphFormatError("expected header 'p bip <|X|> <|Y|> <|E|>'", lineno)
            nx_, ny_, ne_ = (_int_field(t, lineno) for t in parts[2:])
            if min(nx_, ny_, ne_) < 0:
                raise GraphFormatError("header counts must be nonnegative", lineno)
            header = (nx_, ny_, ne_)
            continue
        if parts[0] != "e" or len(parts) != 3:
            raise GraphFormatError("expected edge line 'e <x> <y>'", lineno)
        x, y = _int_field(parts[1], lineno), _int_field(parts[2], lineno)
        if not (1 <= x <= header[0]):
            raise GraphFormatError(f"x index {x} out of range 1..{header[0]}", lineno)
        if not (1 <= y <= header[1]):
            raise GraphFormatError(f"y index {y} out of range 1..{header[1]}", lineno)
        e = (x - 1, y - 1)
        if e in seen:
            raise GraphFormatError(f"duplicate edge ({x}, {y}), first given on line {seen[e]}", lineno)
        seen[e] = lineno
        if len(edges) == header[2]:
            raise GraphFormatError(f"more than the {header[2]} edges declared in the header", lineno)
        edges.append(e)
    if header is None:
        raise GraphFormatError("missing 'p bip' header", last_line or 1)
    if len(edges) != header[2]:
        raise GraphFormatError(f"header declares {header[2]} edges but {len(edges)} were given", last_line)
    return BipartiteGraph(header[0], header[1], tuple(edges))


def _parse_graph_fast(text: str) -> BipartiteGraph | None:
    scanned = scan_records(text, 2, "e", ("p", "bip"))
    if scanned is None:
        return None
    head, arr = scanned
    nx_, ny_, ne_ = (int(t) for t in head[2:])
    if len(arr) != ne_:
        return None
    xs, ys = arr[:, 0] - 1, arr[:, 1] - 1
    if ne_ and (xs.min() < 0 or ys.min() < 0 or xs.max() >= nx_ or ys.max() >= ny_):
        return None
    if np.unique(xs * max(ny_, 1) + ys).size != ne_:
        return None
    arr = np.stack((xs, ys), axis=1)
    return BipartiteGraph._trusted(nx_, ny_, tuple(zip(xs.tolist(), ys.tolist())), arr)


def format_graph(g: BipartiteGraph) -> str:
    lines = [f"p bip {g.x_count} {g.y_count} {len(g.edges)}"]
    lines.extend(f"e {x + 1} {y + 1}" for x, y in g.edges)
    return "\n".join(lines) + "\n"


def to_dot(g: BipartiteGraph, matching: Iterable[Edge] | None = None, name: str = "G") -> str:
    """Render ``g`` as an undirected DOT graph; matching edges are drawn bold."""
    bold = set(matching) if matching is not None else set()
    lines = [f"graph {name} {{"]
    for v in g.vertices():
        lines.append(f'  {v.name} [label="{v.name}"];')
    for x, y in g.edges:
        style = " [style=bold, penwidth=3]" if (x, y) in bold else ""
        lines.append(f"  x{x + 1} -- y{y + 1}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def disjoint_union(graphs: Sequence[BipartiteGraph]) -> BipartiteGraph:
    edges: list[Edge] = []
    dx = dy = 0
    for g in graphs:
        edges.extend((x + dx, y + dy) for x, y in g.edges)
        dx += g.x_count
        dy += g.y_count
    return BipartiteGraph(dx, dy, tuple(edges))
