# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Instrumentation for the state searches."""

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

from ._internal_utils import generate__all__


@dataclass
class SearchStats:
    """Counters a solver fills in while it runs.

    Args:
        expanded (int): states whose successors were generated.
        table_size (int): peak size of the memo table (memoised searches).
        resident (int): states currently held by a polynomial-space search.
        peak_resident (int): the largest value `resident` reached.
    """

    expanded: int = 0
    table_size: int = 0
    resident: int = 0
    peak_resident: int = 0

    def record_table(self, size: int) -> None:
        self.table_size = max(self.table_size, size)

    @contextmanager
    def holding(self, count: int = 1) -> Iterator[None]:
        """Counts `count` states as resident for the duration of the block."""
        self.resident += count
        self.peak_resident = max(self.peak_resident, self.resident)
        try:
            yield
        finally:
            self.resident -= count

    @property
    def peak_states(self) -> int:
        return max(self.table_size, self.peak_resident)


__all__ = generate__all__(__name__)
