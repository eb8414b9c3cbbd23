"""Distribution-level colouring engine for class-structured hypergraphs.

Validity of a colouring of a class-structured hypergraph depends only on how
many vertices of each colour sit in each class, never on which vertices.  The
engine therefore searches over per-class colour-count vectors (distribution
matrices) instead of vertex assignments, which keeps instances with large
classes tractable without ever materialising edges.

Colour labels are quotiented out: matrices are canonicalised by sorting
colour columns in descending lexicographic order, which realises the ordering
"first class of appearance, then count in that class descending".  The search
introduces colours in first-use order and, within a bundle of colours whose
placed columns are identical, assigns counts non-increasingly, so each
colour-relabelling class is enumerated essentially once.

Pruning: after each class is assigned, every edge type fully placeable within
the assigned classes is checked for an achievable forbidden pattern (one part
drawn from the newest class); additionally, per-colour count caps are derived
by testing single-colour draws, which kills most branches before a row is
even completed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .budget import BudgetExceeded, Deadline, _Ticker
from .colouring import Spectrum
from .hypergraph import SigmaHypergraph
from .partitions import Partition, PatternSet

Row = Mapping[int, int]  # colour -> positive count within one class

_DRAW_CACHE: dict[tuple, tuple] = {}


@dataclass(frozen=True)
class DistributionMatrix:
    """Per-class colour multiplicities, canonical under colour relabelling."""

    n: int
    q: int
    k: int
    counts: tuple[tuple[int, ...], ...]  # n rows, k columns

    @classmethod
    def from_rows(cls, n: int, q: int, rows: Sequence[Row]) -> "DistributionMatrix":
        if len(rows) != n:
            raise ValueError(f"expected {n} class rows, got {len(rows)}")
        colours = sorted({c for row in rows for c, v in row.items() if v > 0})
        for row in rows:
            if sum(row.values()) != q:
                raise ValueError(f"class row {dict(row)} does not sum to q={q}")
            if any(v < 0 for v in row.values()):
                raise ValueError("colour counts must be non-negative")
        remap = {c: i for i, c in enumerate(colours)}
        k = len(colours)
        dense = [[0] * k for _ in range(n)]
        for i, row in enumerate(rows):
            for c, v in row.items():
                if v > 0:
                    dense[i][remap[c]] = v
        # Canonical colour order: columns sorted descending lexicographically,
        # i.e. by first class of appearance, then count there descending.
        cols = sorted((tuple(dense[i][j] for i in range(n)) for j in range(k)), reverse=True)
        counts = tuple(tuple(col[i] for col in cols) for i in range(n))
        return cls(n, q, k, counts)

    def rows(self) -> list[dict[int, int]]:
        return [{j: v for j, v in enumerate(row) if v > 0} for row in self.counts]

    def colour_totals(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.counts) for j in range(self.k))

    def to_json_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "k": self.k, "counts": [list(r) for r in self.counts]}


def cdmc(s: SigmaHypergraph) -> DistributionMatrix:
    """Each class monochromatic in its own colour."""
    return DistributionMatrix.from_rows(s.n, s.q, [{i: s.q} for i in range(s.n)])


def _row_key(row: Row) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((c, v) for c, v in row.items() if v > 0))


def _draws(row: Row, a: int) -> tuple[dict[int, int], ...]:
    """All colour sub-multisets of size a drawable from one class row."""
    key = (_row_key(row), a)
    hit = _DRAW_CACHE.get(key)
    if hit is not None:
        return hit
    items = key[0]
    out: list[dict[int, int]] = []

    def rec(i: int, left: int, acc: list[tuple[int, int]]):
        if left == 0:
            out.append(dict(acc))
            return
        if i == len(items):
            return
        colour, avail = items[i]
        for take in range(min(avail, left), -1, -1):
            if take:
                acc.append((colour, take))
            rec(i + 1, left - take, acc)
            if take:
                acc.pop()

    rec(0, a, [])
    result = tuple(out)
    _DRAW_CACHE[key] = result
    return result


@dataclass(frozen=True)
class ForbiddenWitness:
    """An achievable pattern outside the allowed set, with how to achieve it."""

    pattern: Partition
    edge_type: Partition
    part_classes: tuple[int, ...]
    picks: tuple[tuple[tuple[int, int], ...], ...]  # per part: ((colour, count), ...)

    def to_json_dict(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "edge_type": list(self.edge_type),
            "part_classes": list(self.part_classes),
            "picks": [[[c, v] for c, v in pick] for pick in self.picks],
        }


def _place_parts(
    parts: tuple[int, ...],
    idx: int,
    classes: Sequence[int],
    used: set[int],
    prev_class_same: int,
    rows: Sequence[Row],
    totals: dict[int, int],
    allowed_members: frozenset[Partition],
    trail: list[tuple[int, dict[int, int]]],
    collect: set[Partition] | None,
    ticker: _Ticker | None,
) -> tuple[Partition, list] | None:
    """Assign parts[idx:] to distinct classes and draw colours for each.

    With collect=None, returns the first (pattern, placement) whose pattern is
    forbidden; with a collect set, gathers every achievable pattern instead.
    """
    if ticker is not None:
        ticker.tick()
    if idx == len(parts):
        pattern = tuple(sorted(totals.values(), reverse=True))
        if collect is not None:
            collect.add(pattern)
            return None
        if pattern not in allowed_members:
            return pattern, list(trail)
        return None
    a = parts[idx]
    same_as_prev = idx > 0 and parts[idx - 1] == a
    for cls in classes:
        if cls in used:
            continue
        if same_as_prev and cls <= prev_class_same:
            continue  # equal parts take strictly increasing classes
        if sum(rows[cls].values()) < a:
            continue
        used.add(cls)
        for draw in _draws(rows[cls], a):
            for c, v in draw.items():
                totals[c] = totals.get(c, 0) + v
            trail.append((cls, draw))
            hit = _place_parts(
                parts, idx + 1, classes, used, cls, rows, totals, allowed_members, trail, collect, ticker
            )
            trail.pop()
            for c, v in draw.items():
                totals[c] -= v
                if totals[c] == 0:
                    del totals[c]
            if hit is not None:
                used.discard(cls)
                return hit
        used.discard(cls)
    return None


def _witness_from(sigma: Partition, pinned: tuple[int, dict[int, int]] | None, hit: tuple[Partition, list]) -> ForbiddenWitness:
    pattern, trail = hit
    placement = ([pinned] if pinned else []) + trail
    # Order by the part sequence: pinned part was placed first in search order.
    return ForbiddenWitness(
        pattern=pattern,
        edge_type=sigma,
        part_classes=tuple(cls for cls, _ in placement),
        picks=tuple(tuple(sorted(d.items())) for _, d in placement),
    )


def _forbidden_full(
    rows: Sequence[Row],
    sigma_types: Sequence[Partition],
    allowed_members: frozenset[Partition],
    ticker: _Ticker | None = None,
) -> ForbiddenWitness | None:
    """Search all edge placements over all classes for a forbidden pattern."""
    classes = range(len(rows))
    for sigma in sigma_types:
        if len(sigma) > len(rows):
            continue
        hit = _place_parts(sigma, 0, classes, set(), -1, rows, {}, allowed_members, [], None, ticker)
        if hit is not None:
            return _witness_from(sigma, None, hit)
    return None


def _forbidden_with_last(
    rows: Sequence[Row],
    sigma_types: Sequence[Partition],
    allowed_members: frozenset[Partition],
    ticker: _Ticker | None = None,
) -> ForbiddenWitness | None:
    """Search placements where one part is drawn from the newest class.

    Placements entirely inside older classes were checked when those classes
    were placed, so this incremental check keeps full coverage.
    """
    last = len(rows) - 1
    older = range(last)
    for sigma in sigma_types:
        if len(sigma) > len(rows):
            continue
        tried: set[int] = set()
        for i, a in enumerate(sigma):
            if a in tried:
                continue
            tried.add(a)
            rest = sigma[:i] + sigma[i + 1 :]
            if len(rest) > last:
                continue
            for draw in _draws(rows[last], a):
                totals = dict(draw)
                hit = _place_parts(
                    rest, 0, older, set(), -1, rows, totals, allowed_members, [], None, ticker
                )
                if hit is not None:
                    return _witness_from(sigma, (last, draw), hit)
    return None


def _achievable_patterns(rows: Sequence[Row], sigma_types: Sequence[Partition]) -> set[Partition]:
    out: set[Partition] = set()
    classes = range(len(rows))
    for sigma in sigma_types:
        if len(sigma) > len(rows):
            continue
        _place_parts(sigma, 0, classes, set(), -1, rows, {}, frozenset(), [], out, None)
    return out


def realizable_patterns(d: DistributionMatrix, edge_types: PatternSet) -> PatternSet:
    """Every colour pattern achievable by some edge under distribution d."""
    rows = d.rows()
    types = [t for t in edge_types if len(t) <= d.n and t[0] <= d.q]
    return PatternSet(edge_types.r, frozenset(_achievable_patterns(rows, types)))


@dataclass(frozen=True)
class DistValidity:
    ok: bool
    witness: ForbiddenWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


def dist_valid(d: DistributionMatrix, edge_types: PatternSet, allowed: PatternSet) -> DistValidity:
    """Valid iff every achievable pattern is allowed; else one witness."""
    rows = d.rows()
    types = sorted((t for t in edge_types if len(t) <= d.n and t[0] <= d.q), reverse=True)
    w = _forbidden_full(rows, types, allowed.members)
    return DistValidity(w is None, w)


def _bounded_partitions(m: int, max_parts: int, max_val: int) -> Iterator[tuple[int, ...]]:
    """Partitions of m into at most max_parts parts, each at most max_val, lex-descending."""
    if m == 0:
        yield ()
        return
    if max_parts <= 0 or max_val <= 0:
        return
    for first in range(min(m, max_val), 0, -1):
        for rest in _bounded_partitions(m - first, max_parts - 1, first):
            yield (first,) + rest


def _ban_threshold(
    rows: Sequence[Row],
    rep_colour: int,
    q: int,
    sigma_types: Sequence[Partition],
    allowed_members: frozenset[Partition],
) -> int:
    """Smallest count a for which a pure draw of rep_colour forces a violation.

    If the next class gives rep_colour at least this count, some edge taking a
    whole part of that colour from it (other parts from placed classes) has a
    forbidden pattern, so larger counts need not be enumerated.  Returns q+1
    when no pure-draw violation exists.
    """
    older = range(len(rows))
    part_values = sorted({a for sigma in sigma_types for a in sigma if a <= q})
    for a in part_values:
        for sigma in sigma_types:
            tried: set[int] = set()
            for i, val in enumerate(sigma):
                if val != a or val in tried:
                    continue
                tried.add(val)
                rest = sigma[:i] + sigma[i + 1 :]
                if len(rest) > len(rows):
                    continue
                totals = {rep_colour: a}
                hit = _place_parts(rest, 0, older, set(), -1, rows, totals, allowed_members, [], None, None)
                if hit is not None:
                    return a
    return q + 1


def _mono_draws_ok(lam: tuple[int, ...], r: int, allowed_members: frozenset[Partition]) -> bool:
    """Do all r-vertex draws from a class with count multiset lam stay allowed?

    Only relevant when the monochromatic edge type is realizable: every part
    of any other type is drawn from a different class, so the count multiset
    alone decides the within-class patterns.
    """
    row = {i: v for i, v in enumerate(lam)}
    return all(
        tuple(sorted(d.values(), reverse=True)) in allowed_members for d in _draws(row, r)
    )


def _candidate_rows(
    placed: Sequence[Row],
    used: int,
    k: int,
    q: int,
    sigma_types: Sequence[Partition],
    allowed_members: frozenset[Partition],
) -> Iterator[tuple[dict[int, int], int]]:
    """Canonical next-class rows, as (row, colours used after this row).

    Rows are enumerated as a count multiset (a partition of q, largest-first,
    so monochromatic reuse comes first) followed by an assignment of counts to
    colours.  Existing colours are grouped by their placed column; within a
    group counts fall non-increasingly along ascending colour indices, fresh
    colours trail behind the existing ones, and per-colour caps derived from
    single-colour draw violations cut reuse early.
    """
    r = sum(sigma_types[0]) if sigma_types else 0
    columns: dict[int, tuple[int, ...]] = {
        c: tuple(row.get(c, 0) for row in placed) for c in range(used)
    }
    groups: list[list[int]] = []
    seen: dict[tuple[int, ...], int] = {}
    for c in range(used):
        col = columns[c]
        if col in seen:
            groups[seen[col]].append(c)
        else:
            seen[col] = len(groups)
            groups.append([c])
    caps = [
        min(q, _ban_threshold(placed, g[0], q, sigma_types, allowed_members) - 1) for g in groups
    ]
    fresh_cap = min(q, _ban_threshold(placed, used, q, sigma_types, allowed_members) - 1)
    max_fresh = k - used
    mono_realizable = any(len(t) == 1 for t in sigma_types)
    ngroups = len(groups)

    def assign(
        parts: tuple[int, ...],
        pi: int,
        prev_target: int,
        room: list[int],
        last_val: list[int],
        fresh_used: int,
        fresh_last: int,
        acc: list[tuple[int, int]],
    ) -> Iterator[tuple[dict[int, int], int]]:
        if pi == len(parts):
            row: dict[int, int] = {}
            fills: dict[int, int] = {}
            for target, v in acc:
                if target == ngroups:
                    row[used + fills.get(target, 0)] = v
                else:
                    row[groups[target][fills.get(target, 0)]] = v
                fills[target] = fills.get(target, 0) + 1
            yield row, used + fills.get(ngroups, 0)
            return
        v = parts[pi]
        # Equal parts take non-decreasing targets, killing permuted repeats.
        start = prev_target if pi > 0 and parts[pi - 1] == v else 0
        for target in range(start, ngroups + 1):
            if target == ngroups:
                if fresh_used >= max_fresh or v > fresh_cap or v > fresh_last:
                    continue
                acc.append((target, v))
                yield from assign(parts, pi + 1, target, room, last_val, fresh_used + 1, v, acc)
                acc.pop()
            else:
                if room[target] == 0 or v > caps[target] or v > last_val[target]:
                    continue
                room[target] -= 1
                old = last_val[target]
                last_val[target] = v
                acc.append((target, v))
                yield from assign(parts, pi + 1, target, room, last_val, fresh_used, fresh_last, acc)
                acc.pop()
                last_val[target] = old
                room[target] += 1

    for lam in _bounded_partitions(q, q, q):
        if mono_realizable and not _mono_draws_ok(lam, r, allowed_members):
            continue
        yield from assign(lam, 0, 0, [len(g) for g in groups], [q] * ngroups, 0, q, [])


def _search_distributions(
    s: SigmaHypergraph, allowed: PatternSet, k: int, deadline: Deadline | None
) -> Iterator[tuple[dict[int, int], ...]]:
    """Depth-first generator of valid exactly-k distributions, rows as dicts."""
    if allowed.r != s.r:
        raise ValueError(f"pattern set is over r={allowed.r}, structure is {s.r}-uniform")
    if not 1 <= k <= s.vertex_count:
        raise ValueError(f"need 1 <= k <= {s.vertex_count}, got k={k}")
    sigma_types = sorted(s.realizable_types(), reverse=True)
    allowed_members = allowed.members
    ticker = _Ticker(deadline, stride=256)
    rows: list[dict[int, int]] = []

    def rec(ci: int, used: int) -> Iterator[tuple[dict[int, int], ...]]:
        ticker.tick()
        if ci == s.n:
            if used == k:
                yield tuple(dict(r) for r in rows)
            return
        if k - used > (s.n - ci) * s.q:
            return
        for row, new_used in _candidate_rows(rows, used, k, s.q, sigma_types, allowed_members):
            if new_used > k:
                continue
            rows.append(row)
            if _forbidden_with_last(rows, sigma_types, allowed_members, ticker) is None:
                yield from rec(ci + 1, new_used)
            rows.pop()

    yield from rec(0, 0)


def sigma_exists_k(
    s: SigmaHypergraph, allowed: PatternSet, k: int, deadline: Deadline | None = None
) -> DistributionMatrix | None:
    """Canonical valid distribution with exactly k colours, or None.

    Agrees with the explicit engine's search wherever both run; raises
    BudgetExceeded when the deadline passes before a decision.
    """
    for rows in _search_distributions(s, allowed, k, deadline):
        return DistributionMatrix.from_rows(s.n, s.q, rows)
    return None


def sigma_spectrum(
    s: SigmaHypergraph, allowed: PatternSet, k_max: int | None = None, budget_s: float | None = None
) -> Spectrum:
    """Feasible colour counts via the distribution engine; overruns go to unknown."""
    if k_max is None:
        k_max = s.vertex_count
    if not 1 <= k_max <= s.vertex_count:
        raise ValueError(f"need 1 <= k_max <= {s.vertex_count}, got {k_max}")
    feasible, unknown = [], []
    for k in range(1, k_max + 1):
        try:
            if sigma_exists_k(s, allowed, k, deadline=Deadline(budget_s)) is not None:
                feasible.append(k)
        except BudgetExceeded:
            unknown.append(k)
    return Spectrum(tuple(feasible), k_max, tuple(unknown))


def enumerate_valid_distributions(
    s: SigmaHypergraph, allowed: PatternSet, k: int, deadline: Deadline | None = None
) -> Iterator[DistributionMatrix]:
    """All valid exactly-k distributions, canonical, each exactly once.

    Yields in the engine's deterministic search order.  A deadline overrun
    raises BudgetExceeded after whatever partial output was produced.
    """
    seen: set[tuple[tuple[int, ...], ...]] = set()
    for rows in _search_distributions(s, allowed, k, deadline):
        m = DistributionMatrix.from_rows(s.n, s.q, rows)
        if m.counts not in seen:
            seen.add(m.counts)
            yield m
