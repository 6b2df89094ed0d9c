# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

import itertools
import random
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Set, Tuple

import networkx as nx

from ..bucket import ValueRange, pbf_key
from ..graph import Graph, from_networkx


def path(n: int) -> Graph:
    return from_networkx(nx.path_graph(n))


def cycle(n: int) -> Graph:
    return from_networkx(nx.cycle_graph(n))


def star(leaves: int) -> Graph:
    """`K_{1,leaves}` with the centre at vertex 1."""
    return from_networkx(nx.star_graph(leaves))


def complete(n: int) -> Graph:
    return from_networkx(nx.complete_graph(n))


def atlas(max_n: int, connected: bool = True) -> List[Graph]:
    """Every graph of the networkx atlas with `1..max_n` vertices (up to
    isomorphism), optionally only the connected ones."""
    graphs: List[Graph] = []
    for nx_graph in nx.graph_atlas_g():
        n = nx_graph.number_of_nodes()
        if not 1 <= n <= max_n:
            continue
        if connected and not nx.is_connected(nx_graph):
            continue
        graphs.append(from_networkx(nx_graph))
    return graphs


def connected_sample(n: int, count: int, seed: int) -> List[Graph]:
    """A fixed-seed sample of the connected atlas graphs on exactly `n` vertices."""
    graphs = [g for g in atlas(n) if g.n == n]
    return random.Random(seed).sample(graphs, min(count, len(graphs)))


def graph_id(g: Graph) -> str:
    return f"n{g.n}:" + ",".join(f"{u}-{v}" for u, v in sorted(g.edges))


def _free_order(g: Graph, f: Mapping[int, int]) -> List[int]:
    """The vertices outside `f`, breadth first from its domain."""
    order: List[int] = []
    seen = set(f)
    frontier: List[int] = list(f)
    while len(seen) < g.n:
        layer = sorted({u for v in frontier for u in g.neighbours(v)} - seen)
        if not layer:
            layer = [min(v for v in g.vertices if v not in seen)]
        seen.update(layer)
        order.extend(layer)
        frontier = layer
    return order


def extensions_in_window(
    g: Graph, f: Mapping[int, int], value_range: ValueRange
) -> Set[FrozenSet[Tuple[int, int]]]:
    """Every bucket extension of `f` with values in `value_range`, by exhaustion
    over the assignments that keep neighbours at most one apart."""
    found: Set[FrozenSet[Tuple[int, int]]] = set()
    free = _free_order(g, f)
    ext: Dict[int, int] = dict(f)

    def assign(i: int) -> None:
        if i == len(free):
            if is_bucket_extension(g, f, ext):
                found.add(pbf_key(ext))
            return
        v = free[i]
        placed = [ext[u] for u in g.neighbours(v) if u in ext]
        for x in value_range:
            if all(abs(x - y) <= 1 for y in placed):
                ext[v] = x
                assign(i + 1)
                del ext[v]

    assign(0)
    return found


def is_bucket_extension(
    g: Graph, f: Mapping[int, int], ext: Mapping[int, int]
) -> bool:
    if set(ext) != set(g.vertices) or any(ext[v] != x for v, x in f.items()):
        return False
    for u, v in g.edges:
        if abs(ext[u] - ext[v]) > 1:
            return False
        if u in f and v not in f and ext[u] < ext[v]:
            return False
        if v in f and u not in f and ext[v] < ext[u]:
            return False
    return True


def assert_bucket_extension(
    g: Graph,
    f: Mapping[int, int],
    ext: Optional[Mapping[int, int]],
    value_range: Optional[ValueRange] = None,
) -> None:
    assert ext is not None, f"no extension found for {dict(f)}"
    assert is_bucket_extension(g, f, ext), f"{dict(ext)} does not extend {dict(f)}"
    if value_range is not None:
        assert all(x in value_range for x in ext.values())


def assert_ordering_within(g: Graph, pi: Optional[Mapping[int, int]], b: int) -> None:
    assert pi is not None
    assert sorted(pi) == list(g.vertices)
    assert sorted(pi.values()) == list(g.vertices)
    for u, v in g.edges:
        assert abs(pi[u] - pi[v]) <= b, f"edge {u}-{v} stretched beyond {b}"


def assert_pushing_embedding(
    g: Graph, pi: Optional[Mapping[int, int]], d: int
) -> None:
    assert pi is not None
    assert sorted(pi) == list(g.vertices)
    assert len(set(pi.values())) == g.n
    dist = g.distances
    line = sorted(pi, key=pi.__getitem__)
    for u, v in zip(line, line[1:]):
        assert pi[v] - pi[u] == dist[u, v], f"{u} does not push {v}"
    for u, v in g.edges:
        assert abs(pi[u] - pi[v]) <= d, f"edge {u}-{v} stretched beyond {d}"


def permutations_of(g: Graph) -> Iterator[Dict[int, int]]:
    for positions in itertools.permutations(g.vertices):
        yield dict(zip(g.vertices, positions))
