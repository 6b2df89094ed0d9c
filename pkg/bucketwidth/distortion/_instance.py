# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Extended distortion instances, segment guesses and search states."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .._internal_utils import generate__all__
from ..graph import Graph, induced_subgraph


@dataclass(frozen=True)
class ExtendedInstance:
    """A subproblem of embedding the vertex set `X` into `r` segments.

    The free vertices `X - Z` must fill positions `1..r(d+1)` leaving no segment
    empty; each pinned vertex `z` in `Z` keeps its position, which lies in the
    flanking segment 0 or `r + 1`. All distances are taken in the full `graph`.

    Args:
        graph (Graph): the whole graph.
        vertices (FrozenSet[int]): the vertex set `X`.
        r (int): the number of segments.
        pins (FrozenSet[Tuple[int, int]], optional): `(z, position)` pairs for the
            pinned vertices `Z`. Defaults to no pins.
    """

    graph: Graph
    vertices: FrozenSet[int]
    r: int
    pins: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ValueError(
                f"the number of segments must be non-negative, got {self.r}"
            )
        unknown = self.vertices - set(self.graph.vertices)
        if unknown:
            raise ValueError(f"vertices {sorted(unknown)} are not in the graph")
        pinned = [z for z, _ in self.pins]
        if len(set(pinned)) != len(pinned):
            raise ValueError(f"a vertex is pinned twice in {sorted(self.pins)}")
        if not set(pinned) <= self.vertices:
            raise ValueError(f"pinned vertices {sorted(pinned)} must belong to X")

    @classmethod
    def whole(cls, g: Graph, r: int) -> ExtendedInstance:
        """The instance for embedding all of `g` into `r` segments, without pins."""
        return cls(g, frozenset(g.vertices), r)

    @classmethod
    def with_pins(
        cls, g: Graph, vertices: Iterable[int], r: int, pins: Mapping[int, int]
    ) -> ExtendedInstance:
        return cls(g, frozenset(vertices), r, frozenset(pins.items()))

    @cached_property
    def pin_positions(self) -> Dict[int, int]:
        return dict(sorted(self.pins))

    @cached_property
    def free(self) -> Tuple[int, ...]:
        """The free vertices `X - Z`, ascending."""
        return tuple(sorted(self.vertices - set(self.pin_positions)))

    @cached_property
    def free_subgraph(self) -> Tuple[Graph, Tuple[int, ...]]:
        """`G[X - Z]` relabelled onto `1..k`, with its labels (see
        :func:`bucketwidth.graph.induced_subgraph`)."""
        return induced_subgraph(self.graph, self.free)

    @cached_property
    def left_pins(self) -> List[Tuple[int, int]]:
        """Pins at non-positive positions, left to right."""
        return sorted(((z, q) for z, q in self.pins if q <= 0), key=lambda p: p[1])

    @cached_property
    def right_pins(self) -> List[Tuple[int, int]]:
        """Pins at positive positions, left to right."""
        return sorted(((z, q) for z, q in self.pins if q > 0), key=lambda p: p[1])

    def check_for(self, d: int) -> None:
        """Validates the instance for the expansion bound `d`.

        Raises:
            ValueError: if `d < 1`, a pin lies outside the flanking segments or two
                vertices of `X` are disconnected in the graph.
        """
        if d < 1:
            raise ValueError(f"the expansion bound must be positive, got {d}")
        width = d + 1
        for z, q in sorted(self.pins):
            if not (-d <= q <= 0 or self.r * width < q <= (self.r + 1) * width):
                raise ValueError(
                    f"pin {z} -> {q} is outside segments 0 and {self.r + 1} for d={d}"
                )
        dist = self.graph.distances
        for u, v in combinations(sorted(self.vertices), 2):
            if not dist.is_finite(u, v):
                raise ValueError(f"vertices {u} and {v} are disconnected in the graph")


@dataclass(frozen=True)
class SegmentGuess:
    """The first vertex of every segment and its position.

    Args:
        heads (Tuple[Tuple[int, int], ...]): `heads[i - 1] = (v_i, p_i)`, where
            `v_i` is the leftmost vertex of segment `i` and `p_i` its position.
    """

    heads: Tuple[Tuple[int, int], ...]

    def head(self, i: int) -> Tuple[int, int]:
        return self.heads[i - 1]

    @cached_property
    def position_of(self) -> Dict[int, int]:
        return dict(self.heads)

    @cached_property
    def head_positions(self) -> FrozenSet[int]:
        return frozenset(q for _, q in self.heads)


@dataclass(frozen=True)
class DistortionState:
    """A search state after the first `p` positions in color order were decided.

    Args:
        p (int): the number of decided positions.
        pbf (FrozenSet[Tuple[int, int]]): the placed vertices with their segments,
            as a partial bucket function key.
        last (Tuple[Optional[Tuple[int, int]], ...]): per segment, the most recently
            placed `(vertex, position)`, or `None` while the segment is empty.
    """

    p: int
    pbf: FrozenSet[Tuple[int, int]]
    last: Tuple[Optional[Tuple[int, int]], ...]

    @classmethod
    def initial(cls, r: int) -> DistortionState:
        return cls(0, frozenset(), (None,) * r)

    @property
    def f(self) -> Dict[int, int]:
        return dict(self.pbf)

    @property
    def h(self) -> Dict[int, int]:
        return dict(entry for entry in self.last if entry is not None)

    def at(self, p: int) -> DistortionState:
        """The same placements with the counter moved to `p`."""
        return DistortionState(p, self.pbf, self.last)


__all__ = generate__all__(__name__)
