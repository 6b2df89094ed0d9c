# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

from ..stats import SearchStats


def test_search_stats() -> None:
    stats = SearchStats()
    stats.record_table(4)
    stats.record_table(2)
    assert stats.table_size == 4

    with stats.holding():
        with stats.holding(2):
            assert stats.resident == 3
        assert stats.resident == 1
    assert stats.resident == 0
    assert stats.peak_resident == 3
    assert stats.peak_states == 4
