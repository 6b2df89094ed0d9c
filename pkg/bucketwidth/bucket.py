# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Partial bucket functions and their bucket extensions.

A partial bucket function `(A, f)` assigns segment indices to a vertex subset `A`. A
bucket extension is a total map `f̄` with `f̄|A = f`, `|f̄(u) - f̄(v)| <= 1` on every
edge, and `f̄(u) >= f̄(v)` on every edge with `u ∈ A, v ∉ A`. Partial bucket
functions are passed around as plain `{vertex: value}` mappings; the domain `A` is
the key set.
"""

from __future__ import annotations

import itertools
import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Tuple

import numpy as np

from ._internal_utils import check_size_guard, generate__all__
from .graph import Graph, connected_components

logger = logging.getLogger(__name__)

BucketFunction = Mapping[int, int]


class InconsistentPinsError(ValueError):
    """Pinned values disagree with the partial bucket function they should extend."""


@dataclass(frozen=True)
class ValueRange:
    """The closed integer interval `[lo, hi]` that extension values may take."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty value range [{self.lo}, {self.hi}]")

    def __contains__(self, value: object) -> bool:
        return isinstance(value, int) and self.lo <= value <= self.hi

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        return self.hi - self.lo + 1


def pbf_key(f: BucketFunction) -> FrozenSet[Tuple[int, int]]:
    """A hashable form of `f`, for deduplication and memo tables."""
    return frozenset(f.items())


def _fixed_values_consistent(
    g: Graph, domain: FrozenSet[int], fixed: Mapping[int, int]
) -> bool:
    for u, v in g.edges:
        if u in fixed and v in fixed:
            fu, fv = fixed[u], fixed[v]
            if abs(fu - fv) > 1:
                return False
            if u in domain and v not in domain and fu < fv:
                return False
            if v in domain and u not in domain and fv < fu:
                return False
    return True


def complete_extension(
    g: Graph,
    f: BucketFunction,
    pinned: Optional[BucketFunction] = None,
    value_range: Optional[ValueRange] = None,
) -> Optional[Dict[int, int]]:
    """Finds a bucket extension of `(A, f)` that also agrees with `pinned`.

    Pinned vertices outside `A` take their pinned value but do not join the domain,
    so they are exempt from the ordering condition. Edges between fixed vertices are
    checked directly; every other vertex keeps an interval of feasible values which
    is narrowed by its neighbours (ascending vertex order, one sweep at a time) until
    nothing changes or an interval empties. The extension takes the smallest value
    left in each interval.

    Without `value_range` the window `[min pinned - n, max pinned + n]` is used,
    which contains some extension whenever one exists.

    Args:
        g (Graph): the graph.
        f (Mapping[int, int]): the partial bucket function; its keys form `A`.
        pinned (Optional[Mapping[int, int]], optional): extra fixed values. May
            repeat vertices of `A` with the same value. Defaults to None.
        value_range (Optional[ValueRange], optional): bounds for every value of
            the extension. Defaults to None.

    Raises:
        InconsistentPinsError: if `pinned` disagrees with `f` on a vertex of `A`.
        ValueError: if a vertex is not a vertex of `g`.

    Returns:
        Optional[Dict[int, int]]: an extension, or `None` if none exists.

    Examples::

        >>> g = Graph.from_edges(2, [(1, 2)])
        >>> complete_extension(g, {1: 0})
        {1: 0, 2: -1}
    """
    fixed: Dict[int, int] = dict(pinned or {})
    for v, value in fixed.items():
        if v in f and f[v] != value:
            raise InconsistentPinsError(
                f"pin {v} -> {value} disagrees with f({v}) = {f[v]}"
            )
    fixed.update(f)
    for v in fixed:
        if not 1 <= v <= g.n:
            raise ValueError(f"vertex {v} is not a vertex of a graph on 1..{g.n}")
    if value_range is not None and any(x not in value_range for x in fixed.values()):
        return None

    domain = frozenset(f)
    if not _fixed_values_consistent(g, domain, fixed):
        return None

    free = [v for v in g.vertices if v not in fixed]
    if not free:
        return fixed
    if value_range is not None:
        lo, hi = value_range.lo, value_range.hi
    elif fixed:
        lo, hi = min(fixed.values()) - g.n, max(fixed.values()) + g.n
    else:
        return {v: 0 for v in g.vertices}

    bounds: Dict[int, Tuple[int, int]] = {v: (lo, hi) for v in free}
    changed = True
    while changed:
        changed = False
        for v in free:
            v_lo, v_hi = bounds[v]
            for u in g.neighbours(v):
                if u in domain:
                    v_lo, v_hi = max(v_lo, fixed[u] - 1), min(v_hi, fixed[u])
                elif u in fixed:
                    v_lo, v_hi = max(v_lo, fixed[u] - 1), min(v_hi, fixed[u] + 1)
                else:
                    u_lo, u_hi = bounds[u]
                    v_lo, v_hi = max(v_lo, u_lo - 1), min(v_hi, u_hi + 1)
            if v_lo > v_hi:
                return None
            if (v_lo, v_hi) != bounds[v]:
                bounds[v] = (v_lo, v_hi)
                changed = True

    fixed.update((v, bounds[v][0]) for v in free)
    return fixed


PbfMemo = Dict[Tuple[Graph, FrozenSet[Tuple[int, int]]], bool]

_pbf_memo: Optional[PbfMemo] = None


@contextmanager
def memoised_pbf_checks() -> Iterator[PbfMemo]:
    """Caches :func:`is_partial_bucket_function` results inside the block.

    Nested blocks share the outermost table, which is dropped when that block
    exits. Outside any block nothing is cached.
    """
    global _pbf_memo
    saved = _pbf_memo
    memo: PbfMemo = {} if saved is None else saved
    _pbf_memo = memo
    try:
        yield memo
    finally:
        _pbf_memo = saved


def is_partial_bucket_function(g: Graph, f: BucketFunction) -> bool:
    """True iff `(A, f)` has a bucket extension.

    Results are only remembered inside :func:`memoised_pbf_checks`.
    """
    if _pbf_memo is None:
        return complete_extension(g, f) is not None
    key = (g, pbf_key(f))
    if key not in _pbf_memo:
        _pbf_memo[key] = complete_extension(g, f) is not None
    return _pbf_memo[key]


def can_add(g: Graph, f: BucketFunction, v: int, value: int) -> bool:
    """True iff no neighbour `u ∈ A` of `v` has `f(u) < value`."""
    return all(f[u] >= value for u in g.neighbours(v) if u in f)


def is_successor(g: Graph, f: BucketFunction, f_next: BucketFunction) -> bool:
    """True iff `f_next` is a successor of `f`.

    That is, `f_next` adds exactly one vertex `v` to the domain, agrees with `f`
    elsewhere, no neighbour `u ∈ A` of `v` has `f(u) < f_next(v)`, and `f_next` is a
    partial bucket function.
    """
    added = set(f_next) - set(f)
    if len(added) != 1 or len(f_next) != len(f) + 1:
        return False
    (v,) = added
    if any(f_next.get(u) != value for u, value in f.items()):
        return False
    return can_add(g, f, v, f_next[v]) and is_partial_bucket_function(g, f_next)


def _next_branch_vertex(
    g: Graph, fixed: Mapping[int, int]
) -> Optional[Tuple[int, int]]:
    for v in g.vertices:
        if v not in fixed:
            anchors = sorted(u for u in g.neighbours(v) if u in fixed)
            if anchors:
                return v, anchors[0]
    return None


def _extensions(
    g: Graph,
    f: BucketFunction,
    pinned: Dict[int, int],
    value_range: Optional[ValueRange],
) -> Iterator[Dict[int, int]]:
    fixed = {**pinned, **f}
    if len(fixed) == g.n:
        yield fixed
        return
    branch = _next_branch_vertex(g, fixed)
    if branch is None:
        # only reached with a range: the lowest free vertex heads an unanchored part
        assert value_range is not None
        v = min(u for u in g.vertices if u not in fixed)
        candidates = list(value_range)
    else:
        v, w = branch
        candidates = [fixed[w] - 1, fixed[w], fixed[w] + 1]
    for value in candidates:
        extended = {**pinned, v: value}
        if complete_extension(g, f, extended, value_range) is not None:
            yield from _extensions(g, f, extended, value_range)


def enumerate_bucket_extensions(
    g: Graph,
    f: BucketFunction,
    value_range: Optional[ValueRange] = None,
    seed: Optional[Tuple[int, int]] = None,
) -> Iterator[Dict[int, int]]:
    """Yields every bucket extension of `(A, f)` exactly once, with polynomial delay.

    The search fixes one vertex at a time, next to an already fixed vertex, trying the
    three values its fixed neighbour allows. Each partial choice is pruned with
    :func:`complete_extension`, so every branch reaches an extension.

    Extensions are only unique up to a global shift on parts of the graph without a
    fixed vertex, so such parts need either a `seed` or a `value_range`.

    Args:
        g (Graph): the graph.
        f (Mapping[int, int]): the partial bucket function.
        value_range (Optional[ValueRange], optional): bounds for extension values.
            Defaults to None.
        seed (Optional[Tuple[int, int]], optional): a `(vertex, value)` pin that the
            extensions must respect. Defaults to None.

    Raises:
        ValueError: if some component has no vertex of `A` or the seed and no
            `value_range` is given.

    Returns:
        Iterator[Dict[int, int]]: the extensions, in a deterministic order.
    """
    pinned: Dict[int, int] = {}
    if seed is not None:
        pinned[seed[0]] = seed[1]
    if value_range is None:
        anchored = set(f) | set(pinned)
        for component in connected_components(g):
            if not component & anchored:
                raise ValueError(
                    f"component containing vertex {min(component)} has no fixed"
                    " vertex: its extensions form an infinite family, pass a seed or"
                    " a value range"
                )
    if complete_extension(g, f, pinned, value_range) is None:
        return
    yield from _extensions(g, f, pinned, value_range)


def count_triples_bruteforce(g: Graph, N: int) -> int:
    """Counts the triples `(A, f, f̄)` with `f̄(V) ⊆ {1..N}` by exhaustion.

    Every `f̄ ∈ {1..N}^V` that respects the edge condition is paired with all vertex
    subsets `A` satisfying the ordering condition; the subsets are checked together
    as bitmasks.

    Raises:
        SizeGuardError: if `g` has more vertices than the guard (default 12).
    """
    check_size_guard("count_triples_bruteforce", g.n, 12)
    masks = np.arange(1 << g.n)
    member = [((masks >> (v - 1)) & 1).astype(bool) for v in g.vertices]
    edges = sorted(g.edges)
    total = 0
    for values in itertools.product(range(1, N + 1), repeat=g.n):
        excluded = np.zeros(1 << g.n, dtype=bool)
        for u, v in edges:
            fu, fv = values[u - 1], values[v - 1]
            if abs(fu - fv) > 1:
                break
            if fu != fv:
                low, high = (u, v) if fu < fv else (v, u)
                excluded |= member[low - 1] & ~member[high - 1]
        else:
            total += int(np.count_nonzero(~excluded))
    return total


__all__ = generate__all__(__name__)
