"""Integer partition algebra for colour patterns.

A colour pattern of an edge of size r is a partition of r (non-increasing
positive parts).  This module enumerates partitions, computes the closures of
pattern sets under part merging (reduction) and part splitting (expansion),
classifies robustness of pattern sets, and builds the classical named pattern
families (proper, non-monochromatic-non-rainbow, colour-bounded, conflict-free
and friends).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

Partition = tuple[int, ...]


def as_partition(parts: Iterable[int]) -> Partition:
    """Canonicalise an iterable of parts to a non-increasing tuple."""
    t = tuple(sorted(parts, reverse=True))
    if not t:
        raise ValueError("a partition needs at least one part")
    if t[-1] < 1:
        raise ValueError(f"partition parts must be positive, got {list(t)}")
    return t


def monochromatic(r: int) -> Partition:
    """The single-part partition (r): every vertex the same colour."""
    if r < 1:
        raise ValueError("r must be positive")
    return (r,)


def rainbow(r: int) -> Partition:
    """The all-ones partition (1,...,1): every vertex a distinct colour."""
    if r < 1:
        raise ValueError("r must be positive")
    return (1,) * r


def parse_partition(text: str) -> Partition:
    """Parse the bracketed text form, e.g. "[3,1,1,1]"."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"cannot parse partition {text!r}: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
        raise ValueError(f"partition text must be a JSON array of integers, got {text!r}")
    return as_partition(data)


def format_partition(p: Partition) -> str:
    """Render as compact bracketed text, e.g. "[3,1,1,1]"."""
    return "[" + ",".join(str(x) for x in p) + "]"


@dataclass(frozen=True)
class PatternSet:
    """A set of partitions of a fixed r.

    Empty sets are representable (they arise when a pattern is removed from a
    singleton set) but the largest-part and part-count queries reject them.
    Iteration is always in descending lexicographic order, so anything built
    from an iteration is deterministic.
    """

    r: int
    members: frozenset[Partition]

    @classmethod
    def of(cls, r: int, parts: Iterable[Iterable[int]]) -> "PatternSet":
        if r < 1:
            raise ValueError("r must be positive")
        members = frozenset(as_partition(p) for p in parts)
        for p in members:
            if sum(p) != r:
                raise ValueError(f"partition {p} does not sum to r={r}")
        return cls(r, members)

    def __iter__(self) -> Iterator[Partition]:
        return iter(sorted(self.members, reverse=True))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: object) -> bool:
        return p in self.members

    def largest_part(self) -> int:
        """Max over members of the largest part; undefined on the empty set."""
        if not self.members:
            raise ValueError("largest_part is undefined on an empty pattern set")
        return max(p[0] for p in self.members)

    def most_parts(self) -> int:
        """Max over members of the number of parts; undefined on the empty set."""
        if not self.members:
            raise ValueError("most_parts is undefined on an empty pattern set")
        return max(len(p) for p in self.members)

    def union(self, other: "PatternSet") -> "PatternSet":
        self._require_same_r(other)
        return PatternSet(self.r, self.members | other.members)

    def difference(self, other: "PatternSet") -> "PatternSet":
        self._require_same_r(other)
        return PatternSet(self.r, self.members - other.members)

    def without(self, p: Iterable[int]) -> "PatternSet":
        return PatternSet(self.r, self.members - {as_partition(p)})

    def issubset(self, other: "PatternSet") -> bool:
        self._require_same_r(other)
        return self.members <= other.members

    def _require_same_r(self, other: "PatternSet") -> None:
        if self.r != other.r:
            raise ValueError(f"pattern sets have different r: {self.r} vs {other.r}")

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self]

    @classmethod
    def from_json(cls, r: int, data: Iterable[Iterable[int]]) -> "PatternSet":
        return cls.of(r, data)


def iter_partitions(r: int) -> Iterator[Partition]:
    """Yield all partitions of r in descending lexicographic order."""
    if r < 1:
        raise ValueError("r must be positive")
    part = [r]
    while True:
        yield tuple(part)
        # Find the rightmost part > 1; everything after it is a tail of 1s.
        i = len(part) - 1
        while i >= 0 and part[i] == 1:
            i -= 1
        if i < 0:
            return
        ones = len(part) - 1 - i
        part[i] -= 1
        remainder = ones + 1
        part = part[: i + 1]
        while remainder > 0:
            take = min(part[-1], remainder)
            part.append(take)
            remainder -= take


def enumerate_partitions(r: int) -> PatternSet:
    """All partitions of r as a pattern set."""
    return PatternSet(r, frozenset(iter_partitions(r)))


def reduce_once(sigma: Partition) -> set[Partition]:
    """All partitions obtained by merging one pair of parts of sigma."""
    out: set[Partition] = set()
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            merged = list(sigma[:i]) + list(sigma[i + 1 : j]) + list(sigma[j + 1 :])
            merged.append(sigma[i] + sigma[j])
            out.add(as_partition(merged))
    return out


def expand_once(sigma: Partition) -> set[Partition]:
    """All partitions obtained by splitting one part a >= 2 into (a-1, 1).

    Parts equal to 1 are not expandable: splitting a 1 would create a zero
    part, which is not a partition part.
    """
    out: set[Partition] = set()
    for i, a in enumerate(sigma):
        if a >= 2:
            split = list(sigma[:i]) + list(sigma[i + 1 :]) + [a - 1, 1]
            out.add(as_partition(split))
    return out


def _closure(q: PatternSet, step) -> PatternSet:
    if not q.members:
        raise ValueError("closure of an empty pattern set is undefined")
    seen: set[Partition] = set(q.members)
    frontier = list(q.members)
    while frontier:
        nxt: list[Partition] = []
        for p in frontier:
            for derived in step(p):
                if derived not in seen:
                    seen.add(derived)
                    nxt.append(derived)
        frontier = nxt
    return PatternSet(q.r, frozenset(seen))


def rd_closure(q: PatternSet) -> PatternSet:
    """Reflexive-transitive closure under part merging; always contains (r)."""
    return _closure(q, reduce_once)


def ex_closure(q: PatternSet) -> PatternSet:
    """Reflexive-transitive closure under part splitting; always contains (1,...,1)."""
    return _closure(q, expand_once)


def chain(r: int) -> PatternSet:
    """The expansion closure of (r): {(r),(r-1,1),...,(1,...,1)}."""
    return ex_closure(PatternSet.of(r, [monochromatic(r)]))


@dataclass(frozen=True)
class RobustnessReport:
    reduction_closed: bool
    expansion_closed: bool
    simply_closed: bool

    @property
    def robust(self) -> bool:
        return self.reduction_closed or self.expansion_closed or self.simply_closed

    def to_json(self) -> dict:
        return {
            "reduction_closed": self.reduction_closed,
            "expansion_closed": self.expansion_closed,
            "simply_closed": self.simply_closed,
            "robust": self.robust,
        }


def classify_robust(q: PatternSet) -> RobustnessReport:
    """Closure flags of a pattern set.

    Reduction-closed means merging parts of any member stays inside the set,
    expansion-closed likewise for splitting, and simply closed means the set
    contains the whole chain from (r) down to (1,...,1).  A set with any of
    the three properties is robust.
    """
    if not q.members:
        raise ValueError("cannot classify an empty pattern set")
    return RobustnessReport(
        reduction_closed=rd_closure(q).members == q.members,
        expansion_closed=ex_closure(q).members == q.members,
        simply_closed=chain(q.r).members <= q.members,
    )


FAMILY_KINDS = (
    "classical-graph",
    "classical",
    "no-monochromatic",
    "no-rainbow",
    "nmnr",
    "alpha-beta",
    "stably-bounded",
    "conflict-free",
)


def build_family(kind: str, r: int, **params: int) -> PatternSet:
    """Build one of the named pattern families.

    Kinds (case-insensitive):

    - ``classical-graph``: only the rainbow pattern.
    - ``classical`` (hypergraph): every pattern except monochromatic;
      ``no-monochromatic`` is an alias (the D-edge constraint of mixed
      hypergraphs).
    - ``no-rainbow``: every pattern except rainbow (the C-edge constraint).
    - ``nmnr``: neither monochromatic nor rainbow.
    - ``alpha-beta``: patterns whose number of parts lies in [alpha, beta];
      requires alpha, beta.
    - ``stably-bounded``: number of parts in [s, t] and largest part in
      [a, b]; requires s, t, a, b.
    - ``conflict-free``: patterns whose smallest part is 1 (some vertex is
      uniquely coloured in the edge).
    """
    if r < 1:
        raise ValueError("r must be positive")
    kind = kind.lower()
    universe = enumerate_partitions(r)
    m, rb = monochromatic(r), rainbow(r)

    def bounded(name: str, lo_name: str, hi_name: str) -> tuple[int, int]:
        try:
            lo, hi = params[lo_name], params[hi_name]
        except KeyError as exc:
            raise ValueError(f"family {name!r} requires parameters {lo_name} and {hi_name}") from exc
        if not (1 <= lo <= hi <= r):
            raise ValueError(f"need 1 <= {lo_name} <= {hi_name} <= r, got {lo_name}={lo}, {hi_name}={hi}")
        return lo, hi

    if kind == "classical-graph":
        return PatternSet.of(r, [rb])
    if kind in ("classical", "no-monochromatic"):
        return PatternSet(r, universe.members - {m})
    if kind == "no-rainbow":
        return PatternSet(r, universe.members - {rb})
    if kind == "nmnr":
        return PatternSet(r, universe.members - {m, rb})
    if kind == "alpha-beta":
        alpha, beta = bounded(kind, "alpha", "beta")
        return PatternSet(r, frozenset(p for p in universe if alpha <= len(p) <= beta))
    if kind == "stably-bounded":
        s, t = bounded(kind, "s", "t")
        a, b = bounded(kind, "a", "b")
        return PatternSet(r, frozenset(p for p in universe if s <= len(p) <= t and a <= p[0] <= b))
    if kind == "conflict-free":
        return PatternSet(r, frozenset(p for p in universe if p[-1] == 1))
    raise ValueError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
