"""Clique numbers of class-structured hypergraphs.

The clique number of a class-structured hypergraph is determined entirely by
its family of edge types: a set of vertices taking b_i from the i-th class is
a clique exactly when every way of drawing r of them (a_i from class i) has
its positive counts forming an allowed type.  Families admitting such a
capacity vector summing to k are called k-full here, and the clique number is
the largest k admitting one.  A definition-level brute force over explicit
hypergraphs serves as the independent oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .hypergraph import Hypergraph, SigmaHypergraph
from .partitions import Partition, PatternSet, monochromatic, rainbow
from .sigma_engine import _bounded_partitions


class VertexCapExceeded(Exception):
    """Brute-force clique search refused: instance above the vertex cap."""


@dataclass(frozen=True)
class KFullWitness:
    k: int
    b: tuple[int, ...]
    patterns_used: tuple[Partition, ...]

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "b": list(self.b),
            "patterns_used": [list(p) for p in self.patterns_used],
        }


def _draw_vectors(b: tuple[int, ...], r: int):
    """All vectors (a_1..a_t) with 0 <= a_i <= b_i summing to r."""
    t = len(b)

    def rec(i: int, left: int, acc: list[int]):
        if i == t:
            if left == 0:
                yield tuple(acc)
            return
        if left > sum(b[i:]):
            return
        for a in range(min(b[i], left), -1, -1):
            acc.append(a)
            yield from rec(i + 1, left - a, acc)
            acc.pop()

    yield from rec(0, r, [])


def is_k_full(f: PatternSet, k: int, n_cap: int, q_cap: int) -> KFullWitness | None:
    """Search capacity vectors certifying that f is k-full.

    Capacity vectors b are non-increasing with at most n_cap entries, each at
    most q_cap, summing to k; the witness requires every draw vector A with
    a_i <= b_i and sum r to have its positive entries form a member of f.
    Draw vectors are checked exhaustively.
    """
    if not f.members:
        raise ValueError("k-fullness is undefined for an empty pattern family")
    r = f.r
    if k < r:
        raise ValueError(f"k-fullness needs k >= r, got k={k}, r={r}")
    members = f.members
    for b in _bounded_partitions(k, n_cap, q_cap):
        needed: set[Partition] = set()
        ok = True
        for a_vec in _draw_vectors(b, r):
            support = tuple(sorted((a for a in a_vec if a > 0), reverse=True))
            if support not in members:
                ok = False
                break
            needed.add(support)
        if ok:
            return KFullWitness(k, b, tuple(sorted(needed, reverse=True)))
    return None


@dataclass(frozen=True)
class OmegaResult:
    omega: int
    witness: KFullWitness | None

    def to_json_dict(self) -> dict:
        return {"omega": self.omega, "witness": self.witness.to_json_dict() if self.witness else None}


def omega_sigma(s: SigmaHypergraph, structure_caps: bool = True) -> OmegaResult:
    """Clique number of a class-structured hypergraph via k-fullness.

    Capacity vectors are capped at n parts of size at most q, since a clique
    draws b_i vertices from class i; pass structure_caps=False to experiment
    with the uncapped variant.  When neither the monochromatic nor the rainbow
    type is allowed, (r-1)^2 bounds the answer and the scan starts there.

    If no k >= r is full, any r-1 vertices still form a clique vacuously, so
    the result is min(vertex_count, r-1).
    """
    sig = s.edge_types
    if not sig.members:
        raise ValueError("edge type set must be non-empty")
    if s.n < sig.most_parts():
        raise ValueError(f"hypothesis violated: n={s.n} < most parts of the type set ({sig.most_parts()})")
    if s.q < sig.largest_part():
        raise ValueError(f"hypothesis violated: q={s.q} < largest part of the type set ({sig.largest_part()})")
    r = s.r
    upper = s.vertex_count
    if monochromatic(r) not in sig and rainbow(r) not in sig:
        upper = min(upper, (r - 1) ** 2)
    n_cap = s.n if structure_caps else upper
    q_cap = s.q if structure_caps else upper
    # k-fullness is downward monotone, so the first hit from above is the max.
    for k in range(upper, r - 1, -1):
        w = is_k_full(sig, k, n_cap, q_cap)
        if w is not None:
            return OmegaResult(k, w)
    return OmegaResult(min(s.vertex_count, r - 1), None)


def brute_force_clique(h: Hypergraph, vertex_cap: int = 40) -> int:
    """Largest vertex set all of whose r-subsets are edges, by exhaustive growth.

    Sets smaller than r are cliques by convention (nothing to check), so the
    result is at least min(vertex_count, r-1).
    """
    if h.vertex_count > vertex_cap:
        raise VertexCapExceeded(f"{h.vertex_count} vertices exceeds the brute-force cap of {vertex_cap}")
    edges = h.edges
    r = h.r
    best = min(h.vertex_count, r - 1)

    def compatible(stack: list[int], v: int) -> bool:
        if len(stack) + 1 < r:
            return True
        return all(tuple(sorted(c + (v,))) in edges for c in combinations(stack, r - 1))

    def grow(stack: list[int], candidates: list[int]):
        nonlocal best
        best = max(best, len(stack))
        for i, v in enumerate(candidates):
            if len(stack) + len(candidates) - i <= best:
                return
            if compatible(stack, v):
                stack.append(v)
                grow(stack, [u for u in candidates[i + 1 :] if compatible(stack, u)])
                stack.pop()

    grow([], list(range(h.vertex_count)))
    return best
