# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Line embeddings of a graph's shortest-path metric and their exact metrics."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Mapping, Sequence, Tuple

from .._internal_utils import generate__all__
from ..graph import Graph, is_connected
from ..layout import DistortionLayout

Embedding = Dict[int, int]


def _check_connected(g: Graph) -> None:
    if not is_connected(g):
        raise ValueError("line embeddings need a connected graph")


def _check_embedding(g: Graph, pi: Mapping[int, int]) -> None:
    if set(pi) != set(g.vertices):
        raise ValueError(f"embedding must place exactly the vertices 1..{g.n}")
    if len(set(pi.values())) != len(pi):
        raise ValueError(f"embedding {dict(pi)} places two vertices at one position")


def pushing_positions(g: Graph, order: Sequence[int]) -> Embedding:
    """Places the vertices left to right in `order`, each at exactly its graph
    distance from the previous one; the first vertex goes to position 0.

    Raises:
        ValueError: if `order` is not a permutation of the vertices or `g` is
            disconnected.

    Examples::

        >>> pushing_positions(Graph.from_edges(3, [(1, 2), (2, 3)]), [1, 2, 3])
        {1: 0, 2: 1, 3: 2}
    """
    if sorted(order) != list(g.vertices):
        raise ValueError(f"{list(order)} is not a permutation of 1..{g.n}")
    _check_connected(g)
    dist = g.distances
    pi = {order[0]: 0}
    for u, v in zip(order, order[1:]):
        pi[v] = pi[u] + dist[u, v]
    return pi


def embedding_metrics(
    g: Graph, pi: Mapping[int, int]
) -> Tuple[Fraction, Fraction, Fraction]:
    """Contraction, expansion and distortion of `pi`, as exact fractions.

    Over all vertex pairs, the ratio `|pi(u) - pi(v)| / d(u, v)` has minimum
    `contraction` and maximum `expansion`; `distortion` is their quotient. A single
    vertex has all three equal to 1.

    Raises:
        ValueError: if `pi` is not injective on the vertices or `g` is disconnected.
    """
    _check_embedding(g, pi)
    _check_connected(g)
    if g.n == 1:
        return Fraction(1), Fraction(1), Fraction(1)
    dist = g.distances
    ratios = [
        Fraction(abs(pi[u] - pi[v]), dist[u, v])
        for u, v in combinations(g.vertices, 2)
    ]
    contraction, expansion = min(ratios), max(ratios)
    return contraction, expansion, expansion / contraction


def expansion_at_most(g: Graph, pi: Mapping[int, int], d: int) -> bool:
    """True iff `|pi(u) - pi(v)| <= d * d(u, v)` for every vertex pair."""
    _check_embedding(g, pi)
    _check_connected(g)
    dist = g.distances
    return all(
        abs(pi[u] - pi[v]) <= d * dist[u, v] for u, v in combinations(g.vertices, 2)
    )


def is_pushing(g: Graph, pi: Mapping[int, int]) -> bool:
    """True iff every vertex sits at exactly its graph distance from its left
    neighbour on the line."""
    _check_embedding(g, pi)
    _check_connected(g)
    dist = g.distances
    line = sorted(pi, key=pi.__getitem__)
    return all(pi[v] - pi[u] == dist[u, v] for u, v in zip(line, line[1:]))


def satisfies_distortion_segments(
    g: Graph, layout: DistortionLayout, pi: Mapping[int, int]
) -> bool:
    """Checks `expansion <= layout.d` of a pushing embedding through segments and
    colors alone.

    Raises:
        ValueError: if a position lies outside `1..layout.size`.
    """
    _check_embedding(g, pi)
    outside = sorted(v for v, q in pi.items() if not 1 <= q <= layout.size)
    if outside:
        raise ValueError(
            f"vertices {outside} are placed outside positions 1..{layout.size}"
        )
    return layout.edges_respect_segments(g.edges, pi)


__all__ = generate__all__(__name__)
