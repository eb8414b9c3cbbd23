"""Uniform hypergraphs: explicit representation, constructors and file I/O.

Vertices are dense integer indices.  Edges are stored as sorted tuples so the
whole structure has a single canonical form; the JSON file format sorts edges
lexicographically and is therefore byte-stable and diffable.

Constructors cover the complete hypergraph, class-structured hypergraphs
(n blocks of q vertices with a set of allowed block-intersection types),
a row/column grid construction, and the edge-bundle hypergraph whose vertices
are the edges of a complete graph (used for Ramsey-style checks).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

from .partitions import Partition, PatternSet, as_partition

DEFAULT_EDGE_CAP = 10**7


class EdgeCapExceeded(Exception):
    """Explicit construction would materialise more edges than the cap allows."""


@dataclass(frozen=True)
class Hypergraph:
    r: int
    vertex_count: int
    edges: frozenset[tuple[int, ...]]

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "vertices": self.vertex_count,
            "edges": [list(e) for e in self.sorted_edges()],
        }


def make_hypergraph(r: int, vertex_count: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
    """Validate and canonicalise; duplicate edges collapse silently here."""
    if r < 1:
        raise ValueError("uniformity r must be positive")
    if vertex_count < 1:
        raise ValueError("vertex_count must be positive")
    canon = set()
    for e in edges:
        t = tuple(sorted(e))
        if len(t) != r or len(set(t)) != r:
            raise ValueError(f"edge {list(e)} is not a set of {r} distinct vertices")
        if t[0] < 0 or t[-1] >= vertex_count:
            raise ValueError(f"edge {list(e)} has a vertex outside [0, {vertex_count})")
        canon.add(t)
    return Hypergraph(r, vertex_count, frozenset(canon))


def build_complete(n: int, r: int) -> Hypergraph:
    """All r-subsets of n vertices."""
    if r < 1 or n < r:
        raise ValueError(f"need n >= r >= 1, got n={n}, r={r}")
    return Hypergraph(r, n, frozenset(combinations(range(n), r)))


@dataclass(frozen=True)
class SigmaHypergraph:
    """Implicit class-structured hypergraph: n classes of q vertices.

    An r-subset is an edge exactly when the partition formed by its non-zero
    class-intersection sizes is one of the allowed edge types.  Vertex v
    belongs to class v // q (block layout), so nothing beyond (n, r, q, types)
    needs storing.  Types that no edge can realise (more parts than classes,
    or a part larger than q) are legal but flagged by unrealizable_types.
    """

    n: int
    r: int
    q: int
    edge_types: PatternSet

    def __post_init__(self):
        if self.n < 1 or self.q < 1 or self.r < 1:
            raise ValueError("n, r and q must be positive")
        if self.edge_types.r != self.r:
            raise ValueError(f"edge types are partitions of {self.edge_types.r}, expected {self.r}")

    @property
    def vertex_count(self) -> int:
        return self.n * self.q

    def class_of(self, v: int) -> int:
        if not 0 <= v < self.vertex_count:
            raise ValueError(f"vertex {v} outside [0, {self.vertex_count})")
        return v // self.q

    def class_vertices(self, i: int) -> range:
        return range(i * self.q, (i + 1) * self.q)

    def realizable_types(self) -> PatternSet:
        return PatternSet(
            self.r,
            frozenset(t for t in self.edge_types.members if len(t) <= self.n and t[0] <= self.q),
        )

    def unrealizable_types(self) -> PatternSet:
        return self.edge_types.difference(self.realizable_types())

    def key(self) -> dict:
        return {"n": self.n, "r": self.r, "q": self.q, "Sigma": self.edge_types.to_json()}


def edge_type(s: SigmaHypergraph, edge: Iterable[int]) -> Partition:
    """Partition of r formed by the non-zero class-intersection sizes."""
    verts = tuple(edge)
    if len(verts) != s.r or len(set(verts)) != s.r:
        raise ValueError(f"edge {list(verts)} is not a set of {s.r} distinct vertices")
    counts: dict[int, int] = {}
    for v in verts:
        c = s.class_of(v)
        counts[c] = counts.get(c, 0) + 1
    return as_partition(counts.values())


def _sigma_edge_count(s: SigmaHypergraph) -> int:
    total = 0
    for t in s.realizable_types():
        ways = 1
        remaining = s.n
        # Group equal parts: equal-size parts go to strictly increasing
        # classes, so each size group contributes one class combination.
        i = 0
        while i < len(t):
            j = i
            while j < len(t) and t[j] == t[i]:
                j += 1
            mult = j - i
            ways *= comb(remaining, mult)
            remaining -= mult
            i = j
        for a in t:
            ways *= comb(s.q, a)
        total += ways
    return total


def build_sigma_explicit(s: SigmaHypergraph, edge_cap: int = DEFAULT_EDGE_CAP) -> Hypergraph:
    """Materialise every edge of a class-structured hypergraph.

    Enumeration is canonical (equal-size parts are assigned to strictly
    increasing class indices), so each edge is produced exactly once and no
    dedup pass is needed.
    """
    count = _sigma_edge_count(s)
    if count > edge_cap:
        raise EdgeCapExceeded(
            f"explicit construction needs {count} edges, above the cap of {edge_cap}; "
            "use the implicit engine instead"
        )
    edges: list[tuple[int, ...]] = []

    def place(parts: tuple[int, ...], lowest_class: dict[int, int], available: list[int], chosen: list[int]):
        if not parts:
            pick_vertices(chosen, 0, ())
            return
        a = parts[0]
        floor = lowest_class.get(a, -1)
        for idx, cls in enumerate(available):
            if cls <= floor:
                continue
            rest_avail = available[:idx] + available[idx + 1 :]
            old = lowest_class.get(a, -1)
            lowest_class[a] = cls
            place(parts[1:], lowest_class, rest_avail, chosen + [cls])
            if old == -1:
                del lowest_class[a]
            else:
                lowest_class[a] = old

    def pick_vertices(classes: list[int], i: int, acc: tuple[int, ...]):
        if i == len(classes):
            edges.append(tuple(sorted(acc)))
            return
        cls = classes[i]
        for verts in combinations(s.class_vertices(cls), current_parts[i]):
            pick_vertices(classes, i + 1, acc + verts)

    for t in s.realizable_types():
        current_parts = t
        place(t, {}, list(range(s.n)), [])
    return Hypergraph(s.r, s.vertex_count, frozenset(edges))


def build_grid(
    rows: int,
    cols: int,
    cell_size: int,
    row_patterns: PatternSet,
    col_patterns: PatternSet,
    r: int,
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> Hypergraph:
    """Grid of rows x cols cells, each holding cell_size vertices.

    An r-subset is an edge iff the partition of its non-empty row
    intersections is in row_patterns and likewise for columns.  Cells are laid
    out row-major: vertex v sits in cell v // cell_size, which is at
    (cell // cols, cell % cols).
    """
    if rows < 1 or cols < 1 or cell_size < 1 or r < 1:
        raise ValueError("rows, cols, cell_size and r must be positive")
    n = rows * cols * cell_size
    if n < r:
        raise ValueError(f"grid has {n} vertices, fewer than r={r}")
    if row_patterns.r != r or col_patterns.r != r:
        raise ValueError("row and column pattern sets must be partitions of r")
    if comb(n, r) > edge_cap:
        raise EdgeCapExceeded(f"grid filter would scan {comb(n, r)} subsets, above the cap of {edge_cap}")

    def row_of(v: int) -> int:
        return (v // cell_size) // cols

    def col_of(v: int) -> int:
        return (v // cell_size) % cols

    edges = []
    for subset in combinations(range(n), r):
        rc: dict[int, int] = {}
        cc: dict[int, int] = {}
        for v in subset:
            rc[row_of(v)] = rc.get(row_of(v), 0) + 1
            cc[col_of(v)] = cc.get(col_of(v), 0) + 1
        if as_partition(rc.values()) in row_patterns and as_partition(cc.values()) in col_patterns:
            edges.append(subset)
    return Hypergraph(r, n, frozenset(edges))


def build_ramsey(n: int, r: int, p: int) -> Hypergraph:
    """Bundle hypergraph for Ramsey-style colouring checks.

    Vertices are the r-subsets of an n-set (in lexicographic order); each
    p-subset of the n-set contributes one edge consisting of all its
    r-subsets, so the result is C(p,r)-uniform with C(n,p) edges.
    """
    if r < 1 or p <= r:
        raise ValueError(f"need p >= r+1 >= 2, got r={r}, p={p}")
    if n < p:
        raise ValueError(f"need n >= p, got n={n}, p={p}")
    index = {c: i for i, c in enumerate(combinations(range(n), r))}
    edges = []
    for pset in combinations(range(n), p):
        edges.append(tuple(sorted(index[c] for c in combinations(pset, r))))
    return Hypergraph(comb(p, r), comb(n, r), frozenset(edges))


def write_hypergraph(h: Hypergraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(h.to_json_dict(), fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def from_json_dict(data: dict, source: str = "<data>") -> Hypergraph:
    for field in ("r", "vertices", "edges"):
        if field not in data:
            raise ValueError(f"{source}: missing field {field!r}")
    r, vertex_count, raw_edges = data["r"], data["vertices"], data["edges"]
    if not isinstance(r, int) or not isinstance(vertex_count, int) or not isinstance(raw_edges, list):
        raise ValueError(f"{source}: fields 'r'/'vertices' must be integers and 'edges' a list")
    seen: set[tuple[int, ...]] = set()
    dupes = 0
    for i, e in enumerate(raw_edges):
        if not isinstance(e, list) or not all(isinstance(v, int) for v in e):
            raise ValueError(f"{source}: edge #{i} is not a list of integers")
        t = tuple(sorted(e))
        if len(t) != r or len(set(t)) != r:
            raise ValueError(f"{source}: edge #{i} {e} does not have {r} distinct vertices")
        if t in seen:
            dupes += 1
        seen.add(t)
    if dupes:
        warnings.warn(f"{source}: dropped {dupes} duplicate edge(s)", stacklevel=2)
    return make_hypergraph(r, vertex_count, seen)


def read_hypergraph(path: str) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    return from_json_dict(data, source=path)
