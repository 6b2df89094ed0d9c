# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Segments and colors of the positions of a line.

Positions are cut into segments of `width` consecutive positions. A position is
identified by its segment and its color (its index within the segment), and the
*color order* lists positions by color first, then by segment. Both solvers fill
positions in color order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Mapping, Tuple

from ._internal_utils import generate__all__


class SegmentLayout:
    """Segment/color arithmetic shared by :class:`PositionLayout` and
    :class:`DistortionLayout`. Subclasses define `width` and `size`."""

    @property
    def width(self) -> int:
        raise NotImplementedError

    @property
    def size(self) -> int:
        raise NotImplementedError

    @property
    def segments(self) -> int:
        return -(-self.size // self.width)

    def segment(self, i: int) -> int:
        """`ceil(i / width)`. Positions `<= 0` fall in segment 0 or below."""
        return -(-i // self.width)

    def color(self, i: int) -> int:
        return (i - 1) % self.width + 1

    def segment_positions(self, j: int) -> range:
        """The positions of segment `j`, clipped to `1..size` for `1 <= j`."""
        start = (j - 1) * self.width + 1
        stop = j * self.width + 1
        if j >= 1:
            stop = min(stop, self.size + 1)
        return range(start, stop)

    @cached_property
    def color_order(self) -> Tuple[int, ...]:
        return tuple(
            sorted(
                range(1, self.size + 1), key=lambda i: (self.color(i), self.segment(i))
            )
        )

    @cached_property
    def color_rank(self) -> Dict[int, int]:
        """0-based index of each position in the color order."""
        return {position: k for k, position in enumerate(self.color_order)}

    def prefix_segment_counts(self, k: int) -> Counter[int]:
        """Multiset of the segments of the first `k` positions in color order."""
        return Counter(self.segment(i) for i in self.color_order[:k])

    def edges_respect_segments(
        self, edges: Iterable[Tuple[int, int]], position: Mapping[int, int]
    ) -> bool:
        """True iff every edge joins equal or adjacent segments, and an edge into the
        next segment leaves from a larger color than it arrives at."""
        for u, v in edges:
            pu, pv = position[u], position[v]
            su, sv = self.segment(pu), self.segment(pv)
            if abs(su - sv) > 1:
                return False
            if su + 1 == sv and self.color(pu) <= self.color(pv):
                return False
            if sv + 1 == su and self.color(pv) <= self.color(pu):
                return False
        return True


@dataclass(frozen=True)
class PositionLayout(SegmentLayout):
    """Positions `1..n` in segments of `b + 1`, for bandwidth bound `b`."""

    n: int
    b: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.b < 0:
            raise ValueError(f"invalid layout n={self.n}, b={self.b}")

    @property
    def width(self) -> int:
        return self.b + 1

    @property
    def size(self) -> int:
        return self.n


@dataclass(frozen=True)
class DistortionLayout(SegmentLayout):
    """Positions `1..r(d+1)` in `r` segments of `d + 1`, for expansion bound `d`."""

    d: int
    r: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.r < 0:
            raise ValueError(f"invalid layout d={self.d}, r={self.r}")

    @property
    def width(self) -> int:
        return self.d + 1

    @property
    def size(self) -> int:
        return self.r * (self.d + 1)


__all__ = generate__all__(__name__)
