# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Brute-force reference answers for small graphs.

Every routine here enumerates its whole search space and refuses inputs beyond a
size guard (see :func:`bucketwidth._internal_utils.size_guard`).
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Dict, FrozenSet, Optional, Set, Tuple

from ._internal_utils import SizeGuardError, check_size_guard, generate__all__
from .bandwidth import Ordering, bandwidth_of
from .bucket import ValueRange, complete_extension, pbf_key
from .distortion import Embedding, pushing_positions
from .graph import Graph, is_connected

logger = logging.getLogger(__name__)

PBF_VALUE_GUARD = 4


def bandwidth_lower_bound(g: Graph) -> int:
    """`ceil(max degree / 2)`: the neighbours of a vertex need that much room on
    one side of it."""
    if not g.edges:
        return 0
    return math.ceil(max(g.degree(v) for v in g.vertices) / 2)


def bandwidth_bruteforce(g: Graph) -> Tuple[int, Ordering]:
    """The bandwidth of `g` by scanning every ordering.

    Orderings are visited as position tuples `(pi(1), ..., pi(n))` in lexicographic
    order; the first optimal one is returned. The scan stops early at
    :func:`bandwidth_lower_bound`.

    Raises:
        SizeGuardError: if `g` has more vertices than the guard (default 9).

    Examples::

        >>> bandwidth_bruteforce(Graph.from_edges(3, [(1, 2), (1, 3)]))
        (1, {1: 2, 2: 1, 3: 3})
    """
    check_size_guard("bandwidth_bruteforce", g.n, 9)
    floor = bandwidth_lower_bound(g)
    best: Optional[Tuple[int, Ordering]] = None
    for positions in itertools.permutations(g.vertices):
        pi = dict(zip(g.vertices, positions))
        value = bandwidth_of(g, pi)
        if best is None or value < best[0]:
            best = value, pi
            if value == floor:
                break
    assert best is not None
    return best


def distortion_bruteforce(g: Graph) -> Optional[Tuple[int, Embedding]]:
    """The least distortion of a pushing embedding of `g`, over every vertex order.

    Pushing embeddings have contraction exactly 1, so their distortion is the
    longest image of an edge. Orders are scanned lexicographically and the first
    optimal embedding is returned, with its leftmost vertex at 0.

    Raises:
        SizeGuardError: if `g` has more vertices than the guard (default 9).

    Returns:
        Optional[Tuple[int, Dict[int, int]]]: the distortion and an embedding, or
        `None` if `g` is disconnected.
    """
    check_size_guard("distortion_bruteforce", g.n, 9)
    if not is_connected(g):
        return None
    if g.n == 1:
        return 1, {1: 0}
    best: Optional[Tuple[int, Embedding]] = None
    for order in itertools.permutations(g.vertices):
        pi = pushing_positions(g, order)
        value = max(abs(pi[u] - pi[v]) for u, v in g.edges)
        if best is None or value < best[0]:
            best = value, pi
            if value == 1:
                break
    assert best is not None
    return best


def pbf_bruteforce(g: Graph, N: int) -> Set[FrozenSet[Tuple[int, int]]]:
    """Every partial bucket function with a bucket extension into `{1..N}`, by
    trying every domain `A` and every `f: A -> {1..N}`.

    Raises:
        ValueError: if `N < 1`.
        SizeGuardError: beyond 6 vertices (see the size guard) or `N > 4`.

    Returns:
        Set[FrozenSet[Tuple[int, int]]]: the partial bucket functions as
        :func:`bucketwidth.bucket.pbf_key` keys.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    check_size_guard("pbf_bruteforce", g.n, 6)
    if N > PBF_VALUE_GUARD:
        raise SizeGuardError(f"pbf_bruteforce refuses N={N} > {PBF_VALUE_GUARD}")
    value_range = ValueRange(1, N)
    found: Set[FrozenSet[Tuple[int, int]]] = set()
    for size in range(g.n + 1):
        for domain in itertools.combinations(g.vertices, size):
            for values in itertools.product(value_range, repeat=size):
                f: Dict[int, int] = dict(zip(domain, values))
                if complete_extension(g, f, value_range=value_range) is not None:
                    found.add(pbf_key(f))
    logger.debug("pbf_bruteforce n=%d N=%d: %d", g.n, N, len(found))
    return found


__all__ = generate__all__(__name__)
