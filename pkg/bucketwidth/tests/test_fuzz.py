# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

import random

import networkx as nx
import pytest

from ..bandwidth import bandwidth_of, minimize_bandwidth, solve_bandwidth
from ..distortion import embedding_metrics, minimize_distortion
from ..graph import Graph, from_networkx
from .helper import assert_ordering_within, assert_pushing_embedding


def random_connected_graph(rng: random.Random) -> Graph:
    n = rng.randint(2, 6)
    p = rng.uniform(0.2, 0.8)
    while True:
        nx_graph = nx.gnp_random_graph(n, p, seed=rng.randrange(2**32))
        if nx.is_connected(nx_graph):
            return from_networkx(nx_graph)


@pytest.mark.parametrize("seed", range(1000))
def test_random_connected_graphs(seed: int) -> None:
    rng = random.Random(seed)
    g = random_connected_graph(rng)
    algo = rng.choice(["expspace", "polyspace"])

    bandwidth, ordering = minimize_bandwidth(g, algo)
    assert_ordering_within(g, ordering, bandwidth)
    assert bandwidth_of(g, ordering) == bandwidth
    assert solve_bandwidth(g, bandwidth - 1, algo) is None

    # polynomial-space distortion runs stay on five vertices or fewer
    distortion, embedding = minimize_distortion(
        g, algo if g.n <= 5 else "expspace"
    )
    assert_pushing_embedding(g, embedding, distortion)
    assert embedding_metrics(g, embedding)[2] <= distortion
