# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""State searches for extended distortion instances.

Positions `1..r(d+1)` are decided one at a time in color order: each step either
leaves the next position empty or places a free vertex there. Placed vertices form
a partial bucket function on `G[X - Z]` whose values are their segments; per
segment only the most recently placed vertex is remembered, which is all the
pushing condition inside a segment needs. The leftmost vertex of every segment is
guessed up front.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from .._internal_utils import generate__all__
from ..bandwidth import ALPHA_SPLIT
from ..bucket import (
    ValueRange,
    can_add,
    enumerate_bucket_extensions,
    is_partial_bucket_function,
    memoised_pbf_checks,
    pbf_key,
)
from ..docs import docstring_from
from ..layout import DistortionLayout
from ..prototypes import enumerate_partial_bucket_functions
from ..stats import SearchStats
from ._embedding import Embedding
from ._instance import DistortionState, ExtendedInstance, SegmentGuess

logger = logging.getLogger(__name__)

Placement = Tuple[int, int]
Entry = Optional[Placement]


class _SearchContext:
    """Everything the successor relation needs for one instance and guess."""

    def __init__(
        self, instance: ExtendedInstance, layout: DistortionLayout, guess: SegmentGuess
    ) -> None:
        if len(guess.heads) != instance.r or layout.r != instance.r:
            raise ValueError(
                f"guess with {len(guess.heads)} heads and layout with {layout.r}"
                f" segments do not match an instance with r={instance.r}"
            )
        self.instance = instance
        self.layout = layout
        self.guess = guess
        self.d = layout.d
        self.r = instance.r
        self.size = layout.size
        self.graph = instance.graph
        self.dist = instance.graph.distances
        self.free = instance.free
        self.local, labels = instance.free_subgraph
        self.index = {v: i for i, v in enumerate(labels, start=1)}
        self.pins = sorted(instance.pins)
        self.order = layout.color_order
        self.rank = layout.color_rank

    def to_local(self, f: Mapping[int, int]) -> Dict[int, int]:
        return {self.index[v]: x for v, x in f.items()}

    def pbf_ok(self, f: Mapping[int, int]) -> bool:
        return is_partial_bucket_function(self.local, self.to_local(f))

    def pair_ok(self, u: int, pu: int, v: int, pv: int) -> bool:
        """Pushing keeps every pair at least its distance apart; edges stretch at
        most `d`."""
        gap, duv = abs(pu - pv), self.dist[u, v]
        return gap >= duv and (duv != 1 or gap <= self.d)

    def pin_ok(self, v: int, q: int) -> bool:
        for z, pz in self.pins:
            dz = self.dist[z, v]
            if not dz <= abs(pz - q) <= self.d * dz:
                return False
        return True

    def fits(self, v: int, q: int, last: Sequence[Entry]) -> bool:
        if not self.pin_ok(v, q):
            return False
        for u, pu in self.guess.heads:
            if u != v and not self.pair_ok(u, pu, v, q):
                return False
        for entry in last:
            if entry is not None and entry[0] != v:
                if not self.pair_ok(entry[0], entry[1], v, q):
                    return False
        return True

    def placement_allowed(self, v: int, q: int) -> bool:
        head_v, head_q = self.guess.head(self.layout.segment(q))
        if q == head_q:
            return v == head_v
        if v in self.guess.position_of:
            return False
        return self.layout.color(q) > self.layout.color(head_q)

    def can_skip(self, p: int) -> bool:
        """Whether the position decided at step `p + 1` may stay empty."""
        return self.order[p] not in self.guess.head_positions

    def place(self, state: DistortionState, v: int) -> Optional[DistortionState]:
        q = self.order[state.p]
        s = self.layout.segment(q)
        f = state.f
        if v in f or not can_add(self.graph, f, v, s):
            return None
        f[v] = s
        if not self.pbf_ok(f):
            return None
        entry = state.last[s - 1]
        if entry is not None and q - entry[1] != self.dist[v, entry[0]]:
            return None
        if not self.fits(v, q, state.last):
            return None
        last = list(state.last)
        last[s - 1] = (v, q)
        return DistortionState(state.p + 1, pbf_key(f), tuple(last))

    def successors(
        self, state: DistortionState
    ) -> List[Tuple[Optional[Placement], DistortionState]]:
        if state.p >= self.size:
            return []
        q = self.order[state.p]
        placed = set(state.f)
        out: List[Tuple[Optional[Placement], DistortionState]] = []
        for v in self.free:
            if v in placed or not self.placement_allowed(v, q):
                continue
            nxt = self.place(state, v)
            if nxt is not None:
                out.append(((v, q), nxt))
        if self.can_skip(state.p):
            out.append((None, state.at(state.p + 1)))
        return out

    def is_state(self, state: DistortionState) -> bool:
        if not 0 <= state.p <= self.size or len(state.last) != self.r:
            return False
        f = state.f
        if not set(f) <= set(self.free):
            return False
        for i in range(1, self.r + 1):
            members = [v for v, x in f.items() if x == i]
            entry = state.last[i - 1]
            if (entry is None) != (not members):
                return False
            head_v, head_q = self.guess.head(i)
            if (self.rank[head_q] < state.p) != (head_v in f):
                return False
            if head_v in f and f[head_v] != i:
                return False
            if entry is None:
                continue
            w, hw = entry
            if f.get(w) != i or self.layout.segment(hw) != i:
                return False
            if not 1 <= hw <= self.size or self.rank[hw] >= state.p:
                return False
            if w == head_v:
                if hw != head_q:
                    return False
            elif hw == head_q or self.layout.color(hw) <= self.layout.color(head_q):
                return False
        return self.pbf_ok(f)

    def is_final(self, state: DistortionState) -> bool:
        if state.p != self.size or set(dict(state.pbf)) != set(self.free):
            return False
        if any(entry is None for entry in state.last):
            return False
        if self.instance.left_pins:
            z, pz = self.instance.left_pins[-1]
            v1, p1 = self.guess.head(1)
            if p1 - pz != self.dist[z, v1]:
                return False
        for i in range(1, self.r + 1):
            entry = state.last[i - 1]
            assert entry is not None
            w, hw = entry
            if i < self.r:
                nxt, q = self.guess.head(i + 1)
            elif self.instance.right_pins:
                nxt, q = self.instance.right_pins[0]
            else:
                continue
            if q - hw != self.dist[w, nxt]:
                return False
        return True

    # Polynomial-space search

    def _skips_ok(self, start: int, stop: int) -> bool:
        return all(self.can_skip(p) for p in range(start, stop))

    def _middle_entries(
        self, src: DistortionState, dst: DistortionState, f: Mapping[int, int], k: int
    ) -> Iterator[Tuple[Entry, ...]]:
        f_src, f_dst = src.f, dst.f
        options: List[List[Entry]] = []
        for i in range(1, self.r + 1):
            members = {v for v, x in f.items() if x == i}
            if not members:
                options.append([None])
            elif members == {v for v, x in f_src.items() if x == i}:
                options.append([src.last[i - 1]])
            elif members == {v for v, x in f_dst.items() if x == i}:
                entry = dst.last[i - 1]
                keep = entry is not None and self.rank[entry[1]] < k
                options.append([entry] if keep else [])
            else:
                new = sorted(members - set(f_src))
                options.append(
                    [
                        (w, q)
                        for w in new
                        for q in self.layout.segment_positions(i)
                        if src.p <= self.rank[q] < k and self.placement_allowed(w, q)
                    ]
                )
        yield from self._compatible(options)

    def path(
        self, src: DistortionState, dst: DistortionState, stats: SearchStats
    ) -> Optional[List[Placement]]:
        """Placements leading from `src` to `dst` through successor states."""
        stats.expanded += 1
        f_src, f_dst = src.f, dst.f
        if src.p > dst.p or any(f_dst.get(v) != x for v, x in f_src.items()):
            return None
        added = sorted(set(f_dst) - set(f_src))
        if not added:
            if src.last != dst.last:
                return None
            return [] if self._skips_ok(src.p, dst.p) else None
        if len(added) == 1:
            (v,) = added
            q = dst.h.get(v)
            if q is None:
                return None
            k = self.rank[q] + 1
            if not src.p < k <= dst.p or not self.placement_allowed(v, q):
                return None
            if not self._skips_ok(src.p, k - 1) or not self._skips_ok(k, dst.p):
                return None
            if self.place(src.at(k - 1), v) != dst.at(k):
                return None
            return [(v, q)]

        size = len(f_src) + len(added) // 2
        for chosen in combinations(added, size - len(f_src)):
            f_mid = {**f_src, **{v: f_dst[v] for v in chosen}}
            if not self.pbf_ok(f_mid):
                continue
            counters = self.counter_range(f_mid)
            for k in range(max(src.p + 1, counters.start), min(dst.p, counters.stop)):
                for last in self._middle_entries(src, dst, f_mid, k):
                    mid = DistortionState(k, pbf_key(f_mid), last)
                    if not self.is_state(mid):
                        continue
                    with stats.holding():
                        left = self.path(src, mid, stats)
                        if left is None:
                            continue
                        right = self.path(mid, dst, stats)
                    if right is not None:
                        return left + right
        return None

    def _compatible(
        self, options: Sequence[Sequence[Entry]]
    ) -> Iterator[Tuple[Entry, ...]]:
        """Combinations of per-segment entries whose placements keep their distance
        bounds to each other, to the heads and to the pins."""
        chosen: List[Entry] = []

        def extend(i: int) -> Iterator[Tuple[Entry, ...]]:
            if i == len(options):
                yield tuple(chosen)
                return
            for entry in options[i]:
                if entry is not None and not self.fits(entry[0], entry[1], chosen):
                    continue
                chosen.append(entry)
                yield from extend(i + 1)
                chosen.pop()

        yield from extend(0)

    def counter_range(self, f: Mapping[int, int]) -> range:
        """Counters `p` at which exactly the heads in `f` have been placed."""
        lo, hi = 0, self.size
        for i, (v, q) in enumerate(self.guess.heads, start=1):
            if v in f:
                if f[v] != i:
                    return range(0)
                lo = max(lo, self.rank[q] + 1)
            else:
                hi = min(hi, self.rank[q])
        return range(lo, hi + 1)

    def entries_at(self, f: Mapping[int, int], p: int) -> Iterator[Tuple[Entry, ...]]:
        options: List[List[Entry]] = []
        for i in range(1, self.r + 1):
            members = sorted(v for v, x in f.items() if x == i)
            if not members:
                options.append([None])
                continue
            options.append(
                [
                    (w, q)
                    for w in members
                    for q in self.layout.segment_positions(i)
                    if self.rank[q] < p and self.placement_allowed(w, q)
                ]
            )
        yield from self._compatible(options)

    def final_entries(
        self, mid: DistortionState, f: Mapping[int, int]
    ) -> Iterator[Tuple[Entry, ...]]:
        f_mid = mid.f
        options: List[List[Entry]] = []
        for i in range(1, self.r + 1):
            members = {v for v, x in f.items() if x == i}
            if members == {v for v, x in f_mid.items() if x == i}:
                options.append([mid.last[i - 1]])
                continue
            entries: List[Entry] = []
            for w in sorted(members - set(f_mid)):
                if i < self.r:
                    nxt, q = self.guess.head(i + 1)
                    candidates: Sequence[int] = [q - self.dist[w, nxt]]
                elif self.instance.right_pins:
                    z, q = self.instance.right_pins[0]
                    candidates = [q - self.dist[w, z]]
                else:
                    candidates = self.layout.segment_positions(i)
                entries.extend(
                    (w, q)
                    for q in candidates
                    if self.layout.segment(q) == i
                    and self.rank[q] >= mid.p
                    and self.placement_allowed(w, q)
                )
            options.append(entries)
        yield from self._compatible(options)


@lru_cache(maxsize=64)
def _context(
    instance: ExtendedInstance, layout: DistortionLayout, guess: SegmentGuess
) -> _SearchContext:
    return _SearchContext(instance, layout, guess)


def dist_state_successors(
    instance: ExtendedInstance,
    layout: DistortionLayout,
    guess: SegmentGuess,
    state: DistortionState,
) -> List[DistortionState]:
    """The successor states of `state`, placements first (ascending vertex), then
    the empty step when the next position may stay empty.

    The position decided next is the `(p + 1)`-th in color order, in segment `s`
    with guessed head `(v_s, p_s)`. Only `v_s` may go to `p_s`, and `p_s` may not
    stay empty; positions of segment `s` left of `p_s` stay empty. Any other free
    vertex may be placed when the placed vertices remain a partial bucket function
    on `G[X - Z]` (with `f(v) = s` and no placed neighbour in a lower segment), it
    sits at exactly its distance from the last vertex placed in segment `s`, and
    its distances to pins, heads and last-placed vertices stay within
    `[d(u, v), d * d(u, v)]` for pins, at least `d(u, v)` for the others, and at
    most `d` across an edge.
    """
    return [nxt for _, nxt in _context(instance, layout, guess).successors(state)]


def is_final_state(
    instance: ExtendedInstance,
    layout: DistortionLayout,
    guess: SegmentGuess,
    state: DistortionState,
) -> bool:
    """True iff every position is decided, every free vertex placed, and the last
    vertex of each segment is at exactly its distance from the next head (from the
    first right pin, for the last segment)."""
    return _context(instance, layout, guess).is_final(state)


def enumerate_segment_guesses(
    instance: ExtendedInstance, d: int, within: Optional[Mapping[int, int]] = None
) -> Iterator[SegmentGuess]:
    """Yields the guesses of segment heads worth searching, in order of segments,
    then vertices, then positions.

    Guesses are dropped when they already contradict a pushing embedding: two heads
    closer than their distance, an edge between heads longer than `d`, a pin
    violating its distance bounds, the first head not at exactly its distance from
    the last left pin, a head further into its segment than any vertex could push
    it, or more segments with two or more vertices than there are spare free
    vertices.

    With `within`, a partial bucket function of placed free vertices, only guesses
    a state placing exactly those vertices can have are kept: segment `i` has
    placed vertices iff its head is placed, and a placed head `v_i` has
    `within[v_i] = i`.
    """
    instance.check_for(d)
    r = instance.r
    if r == 0 or len(instance.free) < r:
        return
    layout = DistortionLayout(d, r)
    dist = instance.graph.distances
    free = instance.free
    reach = {v: max((dist[u, v] for u in free if u != v), default=0) for v in free}
    left = instance.left_pins[-1] if instance.left_pins else None
    right = instance.right_pins[0] if instance.right_pins else None
    pins = sorted(instance.pins)
    heads: List[Tuple[int, int]] = []
    populated = set(within.values()) if within is not None else set()

    def fits(v: int, q: int) -> bool:
        for z, pz in pins:
            dz = dist[z, v]
            if not dz <= abs(pz - q) <= d * dz:
                return False
        for u, pu in heads:
            duv = dist[u, v]
            if q - pu < duv or (duv == 1 and q - pu > d):
                return False
        return True

    def extend(i: int, spare: int) -> Iterator[SegmentGuess]:
        if i > r:
            v_r, p_r = heads[-1]
            if right is not None and right[1] - p_r != dist[v_r, right[0]]:
                if spare == 0:
                    return
            yield SegmentGuess(tuple(heads))
            return
        used = {v for v, _ in heads}
        placed_value = i if i in populated else None
        for v in free:
            if v in used:
                continue
            if within is not None and within.get(v) != placed_value:
                continue
            for q in layout.segment_positions(i):
                if i == 1 and left is not None and q - left[1] != dist[left[0], v]:
                    continue
                if i > 1 and layout.color(q) > reach[v]:
                    continue
                if not fits(v, q):
                    continue
                inexact = i > 1 and q - heads[-1][1] != dist[heads[-1][0], v]
                if inexact and spare == 0:
                    continue
                heads.append((v, q))
                yield from extend(i + 1, spare - int(inexact))
                heads.pop()

    yield from extend(1, len(free) - r)


def _solve_unsegmented(instance: ExtendedInstance) -> Optional[Embedding]:
    left, right = instance.left_pins, instance.right_pins
    if left and right:
        (z, pz), (w, pw) = left[-1], right[0]
        if pw - pz != instance.graph.distances[z, w]:
            return None
    return dict(instance.pin_positions)


def _embedding_with(
    instance: ExtendedInstance, placements: Sequence[Placement]
) -> Embedding:
    embedding = dict(instance.pin_positions)
    embedding.update(placements)
    return embedding


def _solve_expspace(
    instance: ExtendedInstance, d: int, stats: SearchStats
) -> Optional[Embedding]:
    r = instance.r
    layout = DistortionLayout(d, r)
    guesses = 0
    with memoised_pbf_checks():
        for guess in enumerate_segment_guesses(instance, d):
            guesses += 1
            ctx = _SearchContext(instance, layout, guess)
            placements = _search_expspace(ctx, stats)
            if placements is not None:
                logger.debug("expspace d=%d r=%d: solved by guess %d", d, r, guesses)
                return _embedding_with(instance, placements)
    logger.debug("expspace d=%d r=%d: %d guesses, infeasible", d, r, guesses)
    return None


def _solve_by_guesses(
    instance: ExtendedInstance,
    d: int,
    stats: SearchStats,
    search: str,
    dedup: bool = False,
) -> Optional[Embedding]:
    instance.check_for(d)
    free_count, r = len(instance.free), instance.r
    if r > free_count or free_count > r * (d + 1):
        return None
    if r == 0:
        return _solve_unsegmented(instance)
    if search == "expspace":
        return _solve_expspace(instance, d, stats)
    return _solve_polyspace(instance, d, stats, dedup)


def _search_expspace(
    ctx: _SearchContext, stats: SearchStats
) -> Optional[List[Placement]]:
    start = DistortionState.initial(ctx.r)
    visited: Set[DistortionState] = {start}
    placements: List[Placement] = []

    def search(state: DistortionState) -> bool:
        if state.p == ctx.size:
            return ctx.is_final(state)
        stats.expanded += 1
        for placement, nxt in ctx.successors(state):
            if nxt in visited:
                continue
            visited.add(nxt)
            stats.record_table(len(visited))
            if placement is not None:
                placements.append(placement)
            if search(nxt):
                return True
            if placement is not None:
                placements.pop()
        return False

    return placements if search(start) else None


def _solve_polyspace(
    instance: ExtendedInstance, d: int, stats: SearchStats, dedup: bool
) -> Optional[Embedding]:
    """Splits every solution at the state after `k = floor(0.5475 |X - Z|)`
    placements.

    The middle partial bucket functions are enumerated once; for each, only the
    guesses it is consistent with are searched.
    """
    r = instance.r
    layout = DistortionLayout(d, r)
    local, labels = instance.free_subgraph
    k = math.floor(ALPHA_SPLIT * len(instance.free))
    value_range = ValueRange(1, r)
    start = DistortionState.initial(r)
    tried: Set[FrozenSet[Tuple[int, int]]] = set()
    middles = 0
    for local_pbf, _ in enumerate_partial_bucket_functions(local, r, k):
        f_mid = {labels[v - 1]: x for v, x in local_pbf.items()}
        if dedup:
            key = pbf_key(f_mid)
            if key in tried:
                continue
            tried.add(key)
        middles += 1
        for guess in enumerate_segment_guesses(instance, d, within=f_mid):
            ctx = _SearchContext(instance, layout, guess)
            for p in ctx.counter_range(f_mid):
                for last in ctx.entries_at(f_mid, p):
                    mid = DistortionState(p, pbf_key(f_mid), last)
                    if not ctx.is_state(mid):
                        continue
                    with stats.holding():
                        left = ctx.path(start, mid, stats)
                        if left is None:
                            continue
                        right = _finish(ctx, mid, local_pbf, value_range, stats)
                    if right is not None:
                        logger.debug(
                            "polyspace d=%d r=%d k=%d: solved at middle %d",
                            d,
                            r,
                            k,
                            middles,
                        )
                        return _embedding_with(instance, left + right)
    logger.debug("polyspace d=%d r=%d k=%d: %d middles, infeasible", d, r, k, middles)
    return None


def _finish(
    ctx: _SearchContext,
    mid: DistortionState,
    local_pbf: Mapping[int, int],
    value_range: ValueRange,
    stats: SearchStats,
) -> Optional[List[Placement]]:
    labels = ctx.instance.free_subgraph[1]
    for extension in enumerate_bucket_extensions(ctx.local, local_pbf, value_range):
        f_final = {labels[v - 1]: x for v, x in extension.items()}
        if set(f_final.values()) != set(value_range):
            continue
        for last in ctx.final_entries(mid, f_final):
            final = DistortionState(ctx.size, pbf_key(f_final), last)
            if not ctx.is_state(final) or not ctx.is_final(final):
                continue
            with stats.holding():
                right = ctx.path(mid, final, stats)
            if right is not None:
                return right
    return None


def solve_extended_expspace(
    instance: ExtendedInstance, d: int, stats: Optional[SearchStats] = None
) -> Optional[Embedding]:
    """Solves an extended instance by memoised search, one guess at a time.

    A solution places every free vertex at a distinct position in `1..r(d+1)`,
    leaves no segment empty, keeps every pin, is pushing on `X` (each vertex at
    exactly its distance from its left neighbour on the line), stretches no edge
    of `G[X]` beyond `d`, and keeps every pin `z` within `[d(z, v), d * d(z, v)]`
    of every free vertex `v`.

    Args:
        instance (ExtendedInstance): the instance.
        d (int): the expansion bound.
        stats (Optional[SearchStats], optional): instrumentation. Defaults to None.

    Raises:
        ValueError: if the instance is not valid for `d` (see
            :meth:`ExtendedInstance.check_for`).

    Returns:
        Optional[Dict[int, int]]: positions of all of `X` (pins included), or `None`.
    """
    stats = stats if stats is not None else SearchStats()
    return _solve_by_guesses(instance, d, stats, "expspace")


@docstring_from(
    solve_extended_expspace,
    short_description=(
        "Solves an extended instance holding only polynomially many states."
    ),
    add_args=[
        "dedup (bool, optional): skip middle partial bucket functions that were"
        " already tried. Defaults to False.",
    ],
)
def solve_extended_polyspace(
    instance: ExtendedInstance,
    d: int,
    stats: Optional[SearchStats] = None,
    dedup: bool = False,
) -> Optional[Embedding]:
    stats = stats if stats is not None else SearchStats()
    return _solve_by_guesses(instance, d, stats, "polyspace", dedup)


def trace_states(
    instance: ExtendedInstance, d: int, pi: Mapping[int, int]
) -> Tuple[SegmentGuess, List[DistortionState]]:
    """The guess and the state after every step that a solution `pi` passes through.

    After `p` steps the placed vertices are those at the first `p` positions in
    color order, and each segment remembers its rightmost placed vertex.

    Raises:
        ValueError: if a free vertex lies outside `1..r(d+1)`, two share a
            position, or a segment is empty.
    """
    layout = DistortionLayout(d, instance.r)
    free = instance.free
    by_position: Dict[int, int] = {}
    for v in free:
        q = pi[v]
        if not 1 <= q <= layout.size or q in by_position:
            raise ValueError(f"vertex {v} at {q} is not a valid free position")
        by_position[q] = v
    heads = []
    for i in range(1, instance.r + 1):
        occupied = [q for q in layout.segment_positions(i) if q in by_position]
        if not occupied:
            raise ValueError(f"segment {i} is empty")
        heads.append((by_position[occupied[0]], occupied[0]))

    f: Dict[int, int] = {}
    last: List[Entry] = [None] * instance.r
    states = [DistortionState.initial(instance.r)]
    for p, q in enumerate(layout.color_order, start=1):
        v = by_position.get(q)
        if v is not None:
            s = layout.segment(q)
            f[v] = s
            last[s - 1] = (v, q)
        states.append(DistortionState(p, pbf_key(f), tuple(last)))
    return SegmentGuess(tuple(heads)), states


def embedding_from_states(
    states: Sequence[DistortionState], instance: ExtendedInstance
) -> Embedding:
    """Rebuilds a solution from its state path: every vertex is at the position it
    was remembered with, pins stay where they are."""
    embedding = dict(instance.pin_positions)
    for state in states:
        embedding.update(state.h)
    return embedding


__all__ = generate__all__(__name__)
