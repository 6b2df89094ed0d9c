# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

from collections import Counter

import pytest

from ..layout import DistortionLayout, PositionLayout


def test_position_layout() -> None:
    layout = PositionLayout(7, 2)
    assert layout.width == 3
    assert layout.segments == 3
    assert [layout.segment(i) for i in range(1, 8)] == [1, 1, 1, 2, 2, 2, 3]
    assert [layout.color(i) for i in range(1, 8)] == [1, 2, 3, 1, 2, 3, 1]
    assert layout.segment_positions(3) == range(7, 8)
    assert layout.segment_positions(0) == range(-2, 1)
    assert layout.color_order == (1, 4, 7, 2, 5, 3, 6)
    assert layout.color_rank[4] == 1
    assert layout.prefix_segment_counts(4) == Counter({1: 2, 2: 1, 3: 1})

    with pytest.raises(ValueError):
        PositionLayout(0, 1)
    with pytest.raises(ValueError):
        PositionLayout(3, -1)


def test_distortion_layout() -> None:
    layout = DistortionLayout(2, 2)
    assert layout.size == 6
    assert layout.segments == 2
    assert layout.color_order == (1, 4, 2, 5, 3, 6)
    assert layout.segment(0) == 0
    assert layout.segment(-2) == 0
    assert DistortionLayout(3, 0).size == 0

    with pytest.raises(ValueError):
        DistortionLayout(0, 1)


def test_edges_respect_segments() -> None:
    layout = PositionLayout(6, 2)
    # 3 -> 4 crosses into the next segment from a larger color
    assert layout.edges_respect_segments([(1, 2)], {1: 3, 2: 4})
    # 1 -> 4 is three apart
    assert not layout.edges_respect_segments([(1, 2)], {1: 1, 2: 4})
    assert not layout.edges_respect_segments([(1, 2)], {1: 4, 2: 1})
    assert not layout.edges_respect_segments([(1, 2)], {1: 1, 2: 6})
    assert layout.edges_respect_segments([(1, 2)], {1: 2, 2: 1})
