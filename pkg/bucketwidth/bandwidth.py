# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Exact bandwidth: the state search over partial bucket functions.

A *state* is a partial bucket function `(A, f)` whose values are exactly the
segments of the first `|A|` positions in color order. Adding vertices one at a time
through successor states, and placing the `k`-th added vertex at the `k`-th position
in color order, produces exactly the orderings of bandwidth at most `b`.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import (
    Callable,
    Dict,
    FrozenSet,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
)

from ._internal_utils import generate__all__
from .bucket import (
    BucketFunction,
    ValueRange,
    can_add,
    enumerate_bucket_extensions,
    is_partial_bucket_function,
    is_successor,
    memoised_pbf_checks,
    pbf_key,
)
from .docs import bandwidth_algo_docstring, docstring_from, format_docstring
from .graph import Graph, connected_components, induced_subgraph
from .layout import PositionLayout
from .prototypes import enumerate_partial_bucket_functions
from .stats import SearchStats

logger = logging.getLogger(__name__)

Ordering = Dict[int, int]

ALPHA_SPLIT = 0.5475


def _check_ordering(g: Graph, pi: Mapping[int, int]) -> None:
    if set(pi) != set(g.vertices) or sorted(pi.values()) != list(g.vertices):
        raise ValueError(f"{dict(pi)} is not a bijection onto positions 1..{g.n}")


def bandwidth_of(g: Graph, pi: Mapping[int, int]) -> int:
    """The largest `|pi(u) - pi(v)|` over the edges of `g`; 0 without edges.

    Raises:
        ValueError: if `pi` is not a bijection from the vertices onto `1..n`.
    """
    _check_ordering(g, pi)
    return max((abs(pi[u] - pi[v]) for u, v in g.edges), default=0)


def is_b_ordering_via_segments(
    g: Graph, layout: PositionLayout, pi: Mapping[int, int]
) -> bool:
    """Checks `bandwidth_of(g, pi) <= layout.b` through segments and colors alone."""
    _check_ordering(g, pi)
    return layout.edges_respect_segments(g.edges, pi)


def is_state(g: Graph, layout: PositionLayout, f: BucketFunction) -> bool:
    if Counter(f.values()) != layout.prefix_segment_counts(len(f)):
        return False
    return is_partial_bucket_function(g, f)


def state_successors(
    g: Graph,
    layout: PositionLayout,
    f: BucketFunction,
    skip: Optional[Set[FrozenSet[Tuple[int, int]]]] = None,
) -> List[Tuple[int, Dict[int, int]]]:
    """The successor states of the state `f`, with the vertex each one adds.

    The new vertex takes the segment of position `|A| + 1` in color order. Vertices
    are tried in ascending order.

    Args:
        g (Graph): the graph.
        layout (PositionLayout): positions and segments for the bound `b`.
        f (Mapping[int, int]): a state.
        skip (Optional[Set[frozenset]], optional): keys (see
            :func:`bucketwidth.bucket.pbf_key`) of states to leave out. Defaults to
            None.

    Returns:
        List[Tuple[int, Dict[int, int]]]: `(v, f')` pairs; empty once `|A| = n`.
    """
    if len(f) >= g.n:
        return []
    value = layout.segment(layout.color_order[len(f)])
    successors = []
    for v in g.vertices:
        if v in f or not can_add(g, f, v, value):
            continue
        f_next = {**f, v: value}
        if skip is not None and pbf_key(f_next) in skip:
            continue
        if is_partial_bucket_function(g, f_next):
            successors.append((v, f_next))
    return successors


def _ordering_from_sequence(layout: PositionLayout, added: List[int]) -> Ordering:
    return {v: layout.color_order[k] for k, v in enumerate(added)}


def _edgeless_ordering(g: Graph) -> Optional[Ordering]:
    return {v: v for v in g.vertices} if not g.edges else None


def solve_expspace(
    g: Graph, b: int, stats: Optional[SearchStats] = None
) -> Optional[Ordering]:
    """Finds an ordering of bandwidth at most `b`, if there is one.

    Depth-first search from the empty state towards a state with `A = V`; every
    reached state is remembered, so no state is expanded twice.

    Args:
        g (Graph): the graph.
        b (int): the bandwidth bound. `b = 0` is feasible iff `g` has no edges.
        stats (Optional[SearchStats], optional): filled with the number of expanded
            states and the size of the memo table. Defaults to None.

    Raises:
        ValueError: if `b` is negative.

    Returns:
        Optional[Dict[int, int]]: a position for every vertex, or `None`.
    """
    if b < 0:
        raise ValueError(f"the bandwidth bound must be non-negative, got {b}")
    if b == 0:
        return _edgeless_ordering(g)
    stats = stats if stats is not None else SearchStats()
    layout = PositionLayout(g.n, b)
    visited: Set[FrozenSet[Tuple[int, int]]] = {pbf_key({})}
    added: List[int] = []

    def search(f: Dict[int, int]) -> bool:
        if len(f) == g.n:
            return True
        stats.expanded += 1
        for v, f_next in state_successors(g, layout, f, skip=visited):
            visited.add(pbf_key(f_next))
            stats.record_table(len(visited))
            added.append(v)
            if search(f_next):
                return True
            added.pop()
        return False

    with memoised_pbf_checks():
        found = search({})
    logger.debug(
        "expspace n=%d b=%d: %s after %d expansions",
        g.n,
        b,
        "feasible" if found else "infeasible",
        stats.expanded,
    )
    return _ordering_from_sequence(layout, added) if found else None


@dataclass
class _PathSearch:
    g: Graph
    layout: PositionLayout
    stats: SearchStats = field(default_factory=SearchStats)

    def path(
        self, f_from: Dict[int, int], f_to: Dict[int, int]
    ) -> Optional[List[int]]:
        self.stats.expanded += 1
        missing = sorted(set(f_to) - set(f_from))
        if not missing:
            return []
        if len(missing) == 1:
            return missing if is_successor(self.g, f_from, f_to) else None
        k = (len(f_from) + len(f_to)) // 2
        for chosen in combinations(missing, k - len(f_from)):
            middle = {**f_from, **{v: f_to[v] for v in chosen}}
            if not is_state(self.g, self.layout, middle):
                continue
            with self.stats.holding():
                left = self.path(f_from, middle)
                if left is None:
                    continue
                right = self.path(middle, f_to)
            if right is not None:
                return left + right
        return None


def path_between_states(
    g: Graph,
    layout: PositionLayout,
    f_from: BucketFunction,
    f_to: BucketFunction,
    stats: Optional[SearchStats] = None,
) -> Optional[List[int]]:
    """Finds a chain of successor states leading from `f_from` to `f_to`.

    The chain is split at its middle state, which is determined by its domain alone
    (values are inherited from `f_to`). Every candidate middle domain is tried and
    both halves are solved recursively, so only the recursion stack is kept in
    memory.

    Args:
        g (Graph): the graph.
        layout (PositionLayout): positions and segments for the bound `b`.
        f_from (Mapping[int, int]): the start state.
        f_to (Mapping[int, int]): the target state; must extend `f_from`.
        stats (Optional[SearchStats], optional): instrumentation. Defaults to None.

    Raises:
        ValueError: if either argument is not a state or `f_to` does not extend
            `f_from`.

    Returns:
        Optional[List[int]]: the vertices in the order they are added, or `None`.
    """
    for name, f in (("f_from", f_from), ("f_to", f_to)):
        if not is_state(g, layout, f):
            raise ValueError(f"{name}={dict(f)} is not a state for b={layout.b}")
    if any(f_to.get(v) != value for v, value in f_from.items()):
        raise ValueError(f"{dict(f_to)} does not extend {dict(f_from)}")
    search = _PathSearch(g, layout, stats if stats is not None else SearchStats())
    return search.path(dict(f_from), dict(f_to))


@docstring_from(
    solve_expspace,
    short_description=(
        "Finds an ordering of bandwidth at most `b` while holding only polynomially"
        " many states."
    ),
    long_description=(
        "The search is split at the layer `k = floor(0.5475 n)`:"
        " every state of that size is generated from the partial bucket functions"
        " of `g`, connected to the empty state, then to each full state that"
        " extends it."
    ),
    add_args=[
        "full_range (bool, optional): enumerate middle states with values up to `n`"
        " instead of the number of segments. Defaults to False.",
        "dedup (bool, optional): skip middle states that were already tried."
        " Defaults to False.",
    ],
)
def solve_polyspace(
    g: Graph,
    b: int,
    stats: Optional[SearchStats] = None,
    full_range: bool = False,
    dedup: bool = False,
) -> Optional[Ordering]:
    if b < 0:
        raise ValueError(f"the bandwidth bound must be non-negative, got {b}")
    if b == 0:
        return _edgeless_ordering(g)
    layout = PositionLayout(g.n, b)
    search = _PathSearch(g, layout, stats if stats is not None else SearchStats())
    k = math.floor(ALPHA_SPLIT * g.n)
    N = g.n if full_range else layout.segments
    logger.debug("polyspace n=%d b=%d: middle layer k=%d, N=%d", g.n, b, k, N)

    tried: Set[FrozenSet[Tuple[int, int]]] = set()
    for middle, _ in enumerate_partial_bucket_functions(g, N, domain_size=k):
        if dedup:
            key = pbf_key(middle)
            if key in tried:
                continue
            tried.add(key)
        if not is_state(g, layout, middle):
            continue
        with search.stats.holding():
            left = search.path({}, middle)
            if left is None:
                continue
            for full in enumerate_bucket_extensions(g, middle, ValueRange(1, N)):
                if not is_state(g, layout, full):
                    continue
                with search.stats.holding():
                    right = search.path(middle, full)
                if right is not None:
                    logger.debug("polyspace n=%d b=%d: feasible", g.n, b)
                    return _ordering_from_sequence(layout, left + right)
    logger.debug("polyspace n=%d b=%d: infeasible", g.n, b)
    return None


Solver = Callable[[Graph, int, Optional[SearchStats]], Optional[Ordering]]

BANDWIDTH_ALGORITHMS: Dict[str, Solver] = {
    "expspace": solve_expspace,
    "polyspace": solve_polyspace,
}


def _get_solver(algo: str) -> Solver:
    if algo not in BANDWIDTH_ALGORITHMS:
        raise ValueError(
            f"unknown bandwidth algorithm '{algo}',"
            f" expected one of {list(BANDWIDTH_ALGORITHMS)}"
        )
    return BANDWIDTH_ALGORITHMS[algo]


def _per_component(
    g: Graph, solve: Callable[[Graph], Optional[Ordering]]
) -> Optional[Ordering]:
    ordering: Ordering = {}
    offset = 0
    for component in connected_components(g):
        sub, labels = induced_subgraph(g, component)
        sub_ordering = solve(sub)
        if sub_ordering is None:
            return None
        ordering.update({labels[v - 1]: offset + p for v, p in sub_ordering.items()})
        offset += sub.n
    return ordering


@format_docstring(bandwidth_algo_docstring)
def solve_bandwidth(
    g: Graph, b: int, algo: str = "expspace", stats: Optional[SearchStats] = None
) -> Optional[Ordering]:
    """Decides whether `g` has an ordering of bandwidth at most `b`.

    Components are solved separately and their orderings laid side by side, in
    the order of their smallest vertices.

    Args:
        g (Graph): the graph.
        b (int): the bandwidth bound.
        {0}
        stats (Optional[SearchStats], optional): instrumentation, shared by all
            components. Defaults to None.

    Returns:
        Optional[Dict[int, int]]: an ordering as a position per vertex, or `None`.
    """
    solver = _get_solver(algo)
    if b < 0:
        raise ValueError(f"the bandwidth bound must be non-negative, got {b}")
    return _per_component(g, lambda sub: solver(sub, b, stats))


def _minimize_connected(
    g: Graph, solver: Solver, stats: Optional[SearchStats]
) -> Tuple[int, Ordering]:
    lo, hi = (1 if g.edges else 0), g.n - 1
    best: Ordering = {v: v for v in g.vertices}
    while lo < hi:
        mid = (lo + hi) // 2
        ordering = solver(g, mid, stats)
        if ordering is None:
            lo = mid + 1
        else:
            hi, best = mid, ordering
    return lo, best


@format_docstring(bandwidth_algo_docstring)
def minimize_bandwidth(
    g: Graph, algo: str = "expspace", stats: Optional[SearchStats] = None
) -> Tuple[int, Ordering]:
    """The bandwidth of `g` and an ordering attaining it.

    Binary search over `b` in `0..n-1`; the identity ordering certifies `n - 1`.
    Disconnected graphs take the largest bandwidth of their components.

    Args:
        g (Graph): the graph.
        {0}
        stats (Optional[SearchStats], optional): instrumentation. Defaults to None.

    Returns:
        Tuple[int, Dict[int, int]]: the bandwidth and an optimal ordering.

    Examples::

        >>> minimize_bandwidth(Graph.from_edges(3, [(1, 2), (2, 3)]))[0]
        1
    """
    solver = _get_solver(algo)
    value = 0

    def solve(sub: Graph) -> Ordering:
        nonlocal value
        sub_value, ordering = _minimize_connected(sub, solver, stats)
        value = max(value, sub_value)
        return ordering

    ordering = _per_component(g, solve)
    assert ordering is not None
    logger.debug("bandwidth of n=%d graph via %s: %d", g.n, algo, value)
    return value, ordering


__all__ = generate__all__(__name__)
