# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Undirected simple graphs: parsing, BFS distances, connectivity and the rooted
spanning trees used by the bucket-function enumerators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ._internal_utils import generate__all__


Edge = Tuple[int, int]

GRAPH_FORMATS = ("edgelist", "dimacs")


class GraphFormatError(ValueError):
    """A graph document could not be parsed. `lineno` is the 1-based offending line."""

    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """An undirected simple graph on the vertices `1..n`.

    Instances are immutable, so they can be shared between worker processes and used
    as cache keys. Derived data (adjacency, distances) is computed on first use.

    Args:
        n (int): the number of vertices.
        edges (FrozenSet[Tuple[int, int]]): the edges, each stored once as `(u, v)`
            with `u < v`. Use :meth:`Graph.from_edges` to normalise arbitrary pairs.
    """

    n: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"a graph needs at least one vertex, got n={self.n}")
        for u, v in self.edges:
            if not 1 <= u < v <= self.n:
                raise ValueError(
                    f"edge ({u}, {v}) is not a normalised edge on vertices 1..{self.n}"
                )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
        """Builds a graph from unordered vertex pairs, dropping duplicates.

        Raises:
            ValueError: on a self-loop or a vertex outside `1..n`.
        """
        normalised = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            normalised.add((min(u, v), max(u, v)))
        return cls(n, frozenset(normalised))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def adjacency(self) -> Dict[int, FrozenSet[int]]:
        neighbours: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            neighbours[u].append(v)
            neighbours[v].append(u)
        return {v: frozenset(ns) for v, ns in neighbours.items()}

    def neighbours(self, v: int) -> FrozenSet[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def distances(self) -> DistanceMatrix:
        return all_pairs_distances(self)

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(self.vertices)
        nx_graph.add_edges_from(sorted(self.edges))
        return nx_graph


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Shortest-path hop counts between every ordered pair of vertices.

    Vertices are 1-indexed, as everywhere else; the backing array is 0-indexed.
    Pairs in different components hold :attr:`unreachable`, which is larger than any
    real distance. Check :meth:`is_finite` before doing arithmetic with an entry.
    """

    table: np.ndarray

    @property
    def n(self) -> int:
        return int(self.table.shape[0])

    @property
    def unreachable(self) -> int:
        return self.n

    @cached_property
    def _rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in row) for row in self.table.tolist())

    def __getitem__(self, pair: Tuple[int, int]) -> int:
        u, v = pair
        return self._rows[u - 1][v - 1]

    def is_finite(self, u: int, v: int) -> bool:
        return self[u, v] < self.unreachable


@dataclass(frozen=True)
class RootedSpanningTree:
    """A spanning tree of a connected graph, rooted at a vertex of tree-degree 1.

    Args:
        root (int): the root vertex.
        parent (Dict[int, Optional[int]]): tree parent of every vertex (`None` for
            the root).
        order (Tuple[int, ...]): a root-to-leaves (BFS) traversal; every vertex comes
            after its parent.
    """

    root: int
    parent: Dict[int, Optional[int]]
    order: Tuple[int, ...]

    @cached_property
    def _children(self) -> Dict[int, Tuple[int, ...]]:
        children: Dict[int, List[int]] = {v: [] for v in self.order}
        for v in self.order:
            p = self.parent[v]
            if p is not None:
                children[p].append(v)
        return {v: tuple(cs) for v, cs in children.items()}

    @property
    def n(self) -> int:
        return len(self.order)

    def children(self, v: int) -> Tuple[int, ...]:
        return self._children[v]

    def degree(self, v: int) -> int:
        return len(self._children[v]) + (self.parent[v] is not None)

    @property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(
            (min(v, p), max(v, p)) for v, p in self.parent.items() if p is not None
        )

    def branching_vertices(self) -> FrozenSet[int]:
        """Vertices of tree-degree at least 3."""
        return frozenset(v for v in self.order if self.degree(v) >= 3)


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """BFS hop distances for every ordered pair of vertices of `g`."""
    table = np.full((g.n, g.n), g.n, dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(g.to_networkx()):
        for target, length in lengths.items():
            table[source - 1, target - 1] = length
    return DistanceMatrix(table)


def is_connected(g: Graph) -> bool:
    return bool(nx.is_connected(g.to_networkx()))


def connected_components(g: Graph) -> List[FrozenSet[int]]:
    """The vertex sets of the connected components, ordered by smallest vertex."""
    components = [frozenset(c) for c in nx.connected_components(g.to_networkx())]
    return sorted(components, key=min)


def induced_subgraph(
    g: Graph, vertices: Iterable[int]
) -> Tuple[Graph, Tuple[int, ...]]:
    """The subgraph induced by `vertices`, relabelled onto `1..k`.

    Returns:
        Tuple[Graph, Tuple[int, ...]]: the relabelled subgraph and `labels`, where
        `labels[i - 1]` is the vertex of `g` that became vertex `i`. Labels are
        assigned in ascending order of the original vertices.
    """
    labels = tuple(sorted(set(vertices)))
    index = {v: i for i, v in enumerate(labels, start=1)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph.from_edges(len(labels), edges), labels


def from_networkx(nx_graph: nx.Graph) -> Graph:
    """Converts a networkx graph, relabelling its (sorted) nodes onto `1..n`."""
    index = {node: i for i, node in enumerate(sorted(nx_graph.nodes), start=1)}
    return Graph.from_edges(
        len(index), ((index[u], index[v]) for u, v in nx_graph.edges)
    )


def rooted_spanning_tree(g: Graph) -> RootedSpanningTree:
    """A deterministic spanning tree of `g`, rooted at a leaf.

    The tree is the lowest-index BFS tree from vertex 1; the root is the smallest
    vertex of tree-degree 1, and :attr:`RootedSpanningTree.order` is the lowest-index
    BFS order from that root. A single-vertex graph gives the trivial tree.

    Raises:
        ValueError: if `g` is disconnected.
    """
    if not is_connected(g):
        raise ValueError("a spanning tree needs a connected graph")
    if g.n == 1:
        return RootedSpanningTree(root=1, parent={1: None}, order=(1,))

    tree = nx.Graph(list(nx.bfs_edges(g.to_networkx(), 1, sort_neighbors=sorted)))
    root = min(v for v in tree.nodes if tree.degree(v) == 1)
    parent: Dict[int, Optional[int]] = {root: None}
    order = [root]
    for p, v in nx.bfs_edges(tree, root, sort_neighbors=sorted):
        parent[v] = p
        order.append(v)
    return RootedSpanningTree(root=root, parent=parent, order=tuple(order))


def _parse_ints(fields: Sequence[str], lineno: int, what: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in fields)
    except ValueError:
        raise GraphFormatError(
            lineno, f"expected {what}, got '{' '.join(fields)}'"
        ) from None


def _checked_edge(n: int, u: int, v: int, lineno: int) -> Edge:
    for x in (u, v):
        if not 1 <= x <= n:
            raise GraphFormatError(lineno, f"vertex {x} out of range 1..{n}")
    if u == v:
        raise GraphFormatError(lineno, f"self-loop on vertex {u}")
    return (u, v)


def _parse_edgelist(text: str) -> Graph:
    header: Optional[Tuple[int, int]] = None
    header_lineno = 1
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) != 2:
            what = "header 'n m'" if header is None else "edge 'u v'"
            raise GraphFormatError(lineno, f"expected {what}, got '{raw.strip()}'")
        if header is None:
            n, m = _parse_ints(fields, lineno, "header 'n m'")
            if n < 1 or m < 0:
                raise GraphFormatError(lineno, f"invalid header '{n} {m}'")
            header, header_lineno = (n, m), lineno
            continue
        u, v = _parse_ints(fields, lineno, "edge 'u v'")
        edges.append(_checked_edge(header[0], u, v, lineno))

    if header is None:
        raise GraphFormatError(1, "missing header 'n m'")
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(
            header_lineno, f"header declares {m} edges but {len(edges)} are listed"
        )
    return Graph.from_edges(n, edges)


def _parse_dimacs(text: str) -> Graph:
    header: Optional[Tuple[int, int]] = None
    header_lineno = 1
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        kind, rest = fields[0], fields[1:]
        if kind == "p":
            if header is not None:
                raise GraphFormatError(lineno, "duplicate 'p' line")
            if len(rest) != 3 or rest[0] not in ("edge", "col"):
                raise GraphFormatError(lineno, f"expected 'p edge n m', got '{raw}'")
            n, m = _parse_ints(rest[1:], lineno, "'p edge n m'")
            if n < 1 or m < 0:
                raise GraphFormatError(lineno, f"invalid header '{raw.strip()}'")
            header, header_lineno = (n, m), lineno
        elif kind == "e":
            if header is None:
                raise GraphFormatError(lineno, "edge line before the 'p' line")
            if len(rest) != 2:
                raise GraphFormatError(lineno, f"expected 'e u v', got '{raw}'")
            u, v = _parse_ints(rest, lineno, "'e u v'")
            edges.append(_checked_edge(header[0], u, v, lineno))
        else:
            raise GraphFormatError(lineno, f"unknown line type '{kind}'")

    if header is None:
        raise GraphFormatError(1, "missing 'p edge n m' line")
    if len(edges) != header[1]:
        raise GraphFormatError(
            header_lineno,
            f"header declares {header[1]} edges but {len(edges)} are listed",
        )
    return Graph.from_edges(header[0], edges)


def parse_graph(text: str, fmt: str = "edgelist") -> Graph:
    """Parses a graph document.

    The `edgelist` format is a header line `n m` followed by `m` lines `u v`; blank
    lines and `#` comments are ignored. The `dimacs` format uses `c` comment lines,
    one `p edge n m` line and `e u v` edge lines. Repeated edges are merged.

    Args:
        text (str): the document.
        fmt (str, optional): one of `'edgelist'` or `'dimacs'`. Defaults to
            `'edgelist'`.

    Raises:
        GraphFormatError: on a malformed line, a vertex out of range or a self-loop.
        ValueError: on an unknown format name.

    Returns:
        Graph: the parsed graph.

    Examples::

        >>> sorted(parse_graph("3 2\\n1 2\\n2 3").edges)
        [(1, 2), (2, 3)]
    """
    if fmt == "edgelist":
        return _parse_edgelist(text)
    if fmt == "dimacs":
        return _parse_dimacs(text)
    raise ValueError(f"unknown graph format '{fmt}', expected one of {GRAPH_FORMATS}")


def serialize_graph(g: Graph, fmt: str = "edgelist") -> str:
    """The inverse of :func:`parse_graph`; edges are written in sorted order."""
    edges = sorted(g.edges)
    if fmt == "edgelist":
        lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    elif fmt == "dimacs":
        lines = [f"p edge {g.n} {len(edges)}"] + [f"e {u} {v}" for u, v in edges]
    else:
        raise ValueError(
            f"unknown graph format '{fmt}', expected one of {GRAPH_FORMATS}"
        )
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path], fmt: str = "edgelist") -> Graph:
    return parse_graph(Path(path).read_text(), fmt)


__all__ = generate__all__(__name__)
