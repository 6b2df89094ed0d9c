# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Exact minimum-distortion embeddings of graph metrics into the line."""

# This all has to be done manually to keep mypy happy.
# Removing the `--no-implicit-reexport` option ought to fix this, but doesn't appear to.

from ._decompose import (
    DISTORTION_ALGORITHMS,
    minimize_distortion,
    solve_distortion,
    solve_extended,
    split_segments,
    split_size_cap,
)
from ._embedding import (
    Embedding,
    embedding_metrics,
    expansion_at_most,
    is_pushing,
    pushing_positions,
    satisfies_distortion_segments,
)
from ._instance import DistortionState, ExtendedInstance, SegmentGuess
from ._search import (
    dist_state_successors,
    embedding_from_states,
    enumerate_segment_guesses,
    is_final_state,
    solve_extended_expspace,
    solve_extended_polyspace,
    trace_states,
)

__all__ = [
    "DISTORTION_ALGORITHMS",
    "DistortionState",
    "Embedding",
    "ExtendedInstance",
    "SegmentGuess",
    "dist_state_successors",
    "embedding_from_states",
    "embedding_metrics",
    "enumerate_segment_guesses",
    "expansion_at_most",
    "is_final_state",
    "is_pushing",
    "minimize_distortion",
    "pushing_positions",
    "satisfies_distortion_segments",
    "solve_distortion",
    "solve_extended",
    "solve_extended_expspace",
    "solve_extended_polyspace",
    "split_segments",
    "split_size_cap",
    "trace_states",
]
