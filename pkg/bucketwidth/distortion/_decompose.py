# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Top-level distortion solving: segment counts, the middle-segment split and the
search for the least feasible expansion bound."""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .._internal_utils import generate__all__
from ..docs import distortion_algo_docstring, format_docstring, r_threshold_docstring
from ..graph import Graph, connected_components, induced_subgraph, is_connected
from ..layout import DistortionLayout
from ..stats import SearchStats
from ._embedding import Embedding
from ._instance import ExtendedInstance
from ._search import solve_extended_expspace, solve_extended_polyspace

logger = logging.getLogger(__name__)

ExtendedSolver = Callable[
    [ExtendedInstance, int, Optional[SearchStats]], Optional[Embedding]
]

DISTORTION_ALGORITHMS: Dict[str, ExtendedSolver] = {
    "expspace": solve_extended_expspace,
    "polyspace": solve_extended_polyspace,
}


def _get_solver(algo: str) -> ExtendedSolver:
    if algo not in DISTORTION_ALGORITHMS:
        raise ValueError(
            f"unknown distortion algorithm '{algo}',"
            f" expected one of {list(DISTORTION_ALGORITHMS)}"
        )
    return DISTORTION_ALGORITHMS[algo]


def split_segments(r: int) -> range:
    """The segments `k` at which an instance with `r` segments may be split, so
    that segments `k` and `k + 1` both lie in the middle half."""
    return range(max(1, math.ceil(r / 4)), min(r - 1, 3 * r // 4) + 1)


def split_size_cap(free: int, r: int) -> int:
    """The most vertices two adjacent split segments need to hold in some split.

    Summed over the split segments, the pairs `(k, k + 1)` count every vertex of
    those segments at most twice, and every other segment keeps at least one
    vertex, so the smallest pair holds at most `2(free - r + |K|) / |K|`.
    """
    ks = split_segments(r)
    if not ks:
        return 0
    return 2 * (free - r + len(ks)) // len(ks)


def _pushing_runs(
    instance: ExtendedInstance, d: int, k: int, cap: int
) -> Iterator[List[Tuple[int, int]]]:
    """Pushing sequences of free vertices that start in segment `k` and end in
    segment `k + 1`, with at most `cap` vertices."""
    layout = DistortionLayout(d, instance.r)
    dist = instance.graph.distances
    free = instance.free
    end = (k + 1) * (d + 1)
    pins = sorted(instance.pins)
    left = instance.left_pins[-1] if instance.left_pins else None
    run: List[Tuple[int, int]] = []

    def admissible(v: int, q: int) -> bool:
        for z, pz in pins:
            dz = dist[z, v]
            if not dz <= abs(pz - q) <= d * dz:
                return False
        return all(dist[u, v] != 1 or q - pu <= d for u, pu in run)

    def extend() -> Iterator[List[Tuple[int, int]]]:
        v_last, q_last = run[-1]
        if layout.segment(q_last) == k + 1:
            yield list(run)
        if len(run) == cap:
            return
        used = {u for u, _ in run}
        for v in free:
            q = q_last + dist[v_last, v]
            if v in used or q > end or not admissible(v, q):
                continue
            run.append((v, q))
            yield from extend()
            run.pop()

    for v in free:
        for q in layout.segment_positions(k):
            if k == 1 and left is not None and q - left[1] != dist[left[0], v]:
                continue
            if admissible(v, q):
                run.append((v, q))
                yield from extend()
                run.pop()


def _route_components(
    instance: ExtendedInstance, d: int, k: int, run: List[Tuple[int, int]]
) -> Optional[Tuple[List[int], List[int]]]:
    """Sends every component of `G[X - Z - Y]` to the side of `Y` it touches.

    Returns `None` when a component touches both sides or neither.
    """
    layout = DistortionLayout(d, instance.r)
    graph = instance.graph
    in_run = {v for v, _ in run}
    left_marks = {v for v, q in run if layout.segment(q) == k}
    left_marks.update(z for z, _ in instance.left_pins)
    right_marks = {v for v, q in run if layout.segment(q) == k + 1}
    right_marks.update(z for z, _ in instance.right_pins)
    rest = [v for v in instance.free if v not in in_run]
    left: List[int] = []
    right: List[int] = []
    if not rest:
        return left, right
    sub, labels = induced_subgraph(graph, rest)
    for component in connected_components(sub):
        members = [labels[v - 1] for v in sorted(component)]
        touched = {u for v in members for u in graph.neighbours(v)}
        to_left, to_right = bool(touched & left_marks), bool(touched & right_marks)
        if to_left == to_right:
            return None
        (left if to_left else right).extend(members)
    return sorted(left), sorted(right)


def _solve_split(
    instance: ExtendedInstance,
    d: int,
    solve: Callable[[ExtendedInstance], Optional[Embedding]],
) -> Optional[Embedding]:
    r = instance.r
    ks = split_segments(r)
    cap = split_size_cap(len(instance.free), r)
    width = d + 1
    for k in ks:
        r_left, r_right = k - 1, r - k - 1
        shift = (k + 1) * width
        for run in _pushing_runs(instance, d, k, cap):
            routed = _route_components(instance, d, k, run)
            if routed is None:
                continue
            left, right = routed
            if not r_left <= len(left) <= r_left * width:
                continue
            if not r_right <= len(right) <= r_right * width:
                continue
            y_left = {v: q for v, q in run if q <= k * width}
            y_right = {v: q - shift for v, q in run if q > k * width}
            left_pins = {**dict(instance.left_pins), **y_left}
            right_pins = {
                **y_right,
                **{z: q - shift for z, q in instance.right_pins},
            }
            left_part = ExtendedInstance.with_pins(
                instance.graph, [*left, *left_pins], r_left, left_pins
            )
            left_solution = solve(left_part)
            if left_solution is None:
                continue
            right_part = ExtendedInstance.with_pins(
                instance.graph, [*right, *right_pins], r_right, right_pins
            )
            right_solution = solve(right_part)
            if right_solution is None:
                continue
            logger.debug("split r=%d at k=%d with |Y|=%d", r, k, len(run))
            embedding = dict(instance.pin_positions)
            embedding.update(left_solution)
            embedding.update({v: q + shift for v, q in right_solution.items()})
            return embedding
    return None


@format_docstring(distortion_algo_docstring, r_threshold_docstring)
def solve_extended(
    instance: ExtendedInstance,
    d: int,
    algo: str = "expspace",
    r_threshold: Optional[int] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Embedding]:
    """Solves an extended instance, splitting it at two middle segments while it has
    more than `r_threshold` segments.

    A split guesses the vertices `Y` of segments `k` and `k + 1` with their
    positions, sends every remaining component to the side of `Y` it attaches to,
    and solves the two sides as instances pinned by `Y`.

    Args:
        instance (ExtendedInstance): the instance.
        d (int): the expansion bound.
        {0}
        {1}
        stats (Optional[SearchStats], optional): instrumentation. Defaults to None.

    Returns:
        Optional[Dict[int, int]]: positions of all of `X`, or `None`.
    """
    solver = _get_solver(algo)
    instance.check_for(d)

    def solve(part: ExtendedInstance) -> Optional[Embedding]:
        return solve_extended(part, d, algo, r_threshold, stats)

    if r_threshold is None or instance.r <= r_threshold:
        return solver(instance, d, stats)
    if not split_segments(instance.r):
        return solver(instance, d, stats)
    return _solve_split(instance, d, solve)


@format_docstring(distortion_algo_docstring, r_threshold_docstring)
def solve_distortion(
    g: Graph,
    d: int,
    algo: str = "expspace",
    r_threshold: Optional[int] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Embedding]:
    """Finds an embedding of `g` into the line with distortion at most `d`.

    The number of nonempty segments `r` is tried from 1 up to `n`; the first
    feasible one gives the embedding. Positions are in `1..r(d+1)`.

    Args:
        g (Graph): the graph.
        d (int): the distortion bound.
        {0}
        {1}
        stats (Optional[SearchStats], optional): instrumentation. Defaults to None.

    Raises:
        ValueError: if `d < 1` or `algo` is unknown.

    Returns:
        Optional[Dict[int, int]]: a pushing embedding with expansion at most `d`, or
        `None` (always for disconnected graphs).
    """
    _get_solver(algo)
    if d < 1:
        raise ValueError(f"the distortion bound must be positive, got {d}")
    if not is_connected(g):
        logger.debug("n=%d graph with %d components", g.n, len(connected_components(g)))
        return None
    if g.n == 1:
        return {1: 1}
    for r in range(1, g.n + 1):
        if r * (d + 1) < g.n:
            continue
        embedding = solve_extended(
            ExtendedInstance.whole(g, r), d, algo, r_threshold, stats
        )
        if embedding is not None:
            logger.debug("distortion n=%d d=%d: feasible with r=%d", g.n, d, r)
            return embedding
    logger.debug("distortion n=%d d=%d: infeasible", g.n, d)
    return None


@format_docstring(distortion_algo_docstring, r_threshold_docstring)
def minimize_distortion(
    g: Graph,
    algo: str = "expspace",
    r_threshold: Optional[int] = None,
    stats: Optional[SearchStats] = None,
) -> Tuple[int, Embedding]:
    """The least distortion of an embedding of `g` into the line, with an embedding
    attaining it.

    Binary search over `d` in `1..2n-1`; every connected graph embeds with
    distortion at most `2n - 1`.

    Args:
        g (Graph): a connected graph.
        {0}
        {1}
        stats (Optional[SearchStats], optional): instrumentation. Defaults to None.

    Raises:
        ValueError: if `g` is disconnected.

    Returns:
        Tuple[int, Dict[int, int]]: the distortion and an optimal embedding.
    """
    _get_solver(algo)
    if not is_connected(g):
        raise ValueError("a disconnected graph has no line embedding")
    if g.n == 1:
        return 1, {1: 1}
    lo, hi = 1, 2 * g.n - 1
    best: Optional[Embedding] = None
    while lo < hi:
        mid = (lo + hi) // 2
        embedding = solve_distortion(g, mid, algo, r_threshold, stats)
        if embedding is None:
            lo = mid + 1
        else:
            hi, best = mid, embedding
    if best is None:
        best = solve_distortion(g, lo, algo, r_threshold, stats)
    assert best is not None, f"no embedding with distortion {lo}"
    logger.debug("distortion of n=%d graph via %s: %d", g.n, algo, lo)
    return lo, best


__all__ = generate__all__(__name__)
