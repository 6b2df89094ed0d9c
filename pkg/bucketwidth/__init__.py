# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Exact bandwidth and minimum line distortion through partial bucket functions."""

# This all has to be done manually to keep mypy happy.
# Removing the `--no-implicit-reexport` option ought to fix this, but doesn't appear to.

from .bandwidth import bandwidth_of, minimize_bandwidth, solve_bandwidth
from .bucket import (
    complete_extension,
    enumerate_bucket_extensions,
    is_partial_bucket_function,
)
from .distortion import embedding_metrics, minimize_distortion, solve_distortion
from .graph import Graph, parse_graph, read_graph
from .oracle import bandwidth_bruteforce, distortion_bruteforce
from .prototypes import enumerate_partial_bucket_functions
from .stats import SearchStats

__all__ = [
    "Graph",
    "SearchStats",
    "bandwidth_bruteforce",
    "bandwidth_of",
    "complete_extension",
    "distortion_bruteforce",
    "embedding_metrics",
    "enumerate_bucket_extensions",
    "enumerate_partial_bucket_functions",
    "is_partial_bucket_function",
    "minimize_bandwidth",
    "minimize_distortion",
    "parse_graph",
    "read_graph",
    "solve_bandwidth",
    "solve_distortion",
]
