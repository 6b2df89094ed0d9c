# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Prototypes and the enumeration of all partial bucket functions of a graph.

A prototype on a rooted tree with anchor set `B` is a partial bucket function
`(A, f)` together with the values of one of its bucket extensions on `A ∪ B`. When
`B` holds the root and every branching vertex, the vertices outside `A ∪ B` form
paths between consecutive anchored vertices, so prototypes can be generated
root-to-leaves with only local checks. Every generated branch is a prototype.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import (
    AbstractSet,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Tuple,
)

from ._internal_utils import generate__all__
from .bucket import ValueRange, complete_extension
from .graph import (
    Graph,
    RootedSpanningTree,
    connected_components,
    induced_subgraph,
    rooted_spanning_tree,
)

logger = logging.getLogger(__name__)

PATH_PROTOTYPE_KINDS = ("T", "T'", "S", "S'")


@dataclass(frozen=True)
class CountingConstants:
    """Constants of the prototype counting bounds.

    `c` bounds the growth rate of the number of prototypes; `alpha`, `beta` and
    `gamma` are the leading factors for paths anchored at one end (root in / not in
    the domain) and at both ends.
    """

    alpha: float = 4.26
    beta: float = 3.0
    gamma: float = 5.02
    c: float = 4.383

    def __post_init__(self) -> None:
        assert self.delta <= self.c, "delta must not exceed c"
        assert self.gamma * self.delta <= self.c**2, "gamma * delta exceeds c^2"
        assert 0.6 * self.alpha + 0.4 * self.beta <= self.delta

    @property
    def delta(self) -> float:
        return math.sqrt(0.6 * self.alpha**2 + 0.4 * self.beta**2)

    def path_bound(self, kind: str, n: int) -> float:
        """Upper bound on the number of path prototypes of the given kind.

        Args:
            kind (str): `'T'`/`"T'"` for paths anchored at the root end only, with the
                root in/out of the domain; `'S'`/`"S'"` for paths anchored at both
                ends.
            n (int): the number of path edges.
        """
        factors = {"T": self.alpha, "T'": self.beta, "S": self.gamma, "S'": self.gamma}
        if kind not in factors:
            raise ValueError(
                f"unknown prototype kind '{kind}',"
                f" expected one of {PATH_PROTOTYPE_KINDS}"
            )
        return factors[kind] * self.c ** (n - 1)

    def tree_bound(self, n: int) -> float:
        """Upper bound on prototypes of an `n`-vertex tree for one root value and one
        root membership, anchored at the root and the branching vertices."""
        return max(self.alpha, self.delta) * self.c ** (n - 2)


COUNTING = CountingConstants()


@dataclass(frozen=True)
class Prototype:
    """A partial bucket function with extension values pinned on the anchors.

    Args:
        domain (FrozenSet[int]): the domain `A`.
        anchors (FrozenSet[int]): the anchor set `B`.
        values (Dict[int, int]): values on `A ∪ B`.
    """

    domain: FrozenSet[int]
    anchors: FrozenSet[int]
    values: Dict[int, int]

    @property
    def pbf(self) -> Dict[int, int]:
        return {v: self.values[v] for v in sorted(self.domain)}


def _admissible_values(
    base: int,
    dist: int,
    base_in_domain: bool,
    in_domain: bool,
    value_range: Optional[ValueRange],
) -> range:
    # `base` is the nearest anchored ancestor, `dist` tree edges above; the vertices
    # strictly between them are outside A ∪ B.
    lo, hi = base - dist, base + dist
    if in_domain and base_in_domain:
        if dist > 1:
            lo, hi = lo + 1, hi - 1
    elif in_domain:
        lo += 1
    elif base_in_domain:
        hi -= 1
    if value_range is not None:
        lo, hi = max(lo, value_range.lo), min(hi, value_range.hi)
    return range(lo, hi + 1)


def _check_anchors(tree: RootedSpanningTree, anchors: FrozenSet[int]) -> None:
    unknown = anchors - set(tree.order)
    if unknown:
        raise ValueError(f"anchors {sorted(unknown)} are not tree vertices")
    if tree.root not in anchors:
        raise ValueError(f"the anchor set must contain the root {tree.root}")
    missing = tree.branching_vertices() - anchors
    if missing:
        raise ValueError(f"the anchor set misses branching vertices {sorted(missing)}")


def enumerate_prototypes(
    tree: RootedSpanningTree,
    anchors: AbstractSet[int],
    root_value: int,
    root_in_domain: bool,
    value_range: Optional[ValueRange] = None,
    domain_size: Optional[int] = None,
) -> Iterator[Prototype]:
    """Yields every prototype with the given root value and root membership once.

    Vertices are visited in the tree's root-to-leaves order. Each vertex is either
    put into the domain or left out; anchored vertices and domain vertices get a
    value within tree distance `d` of their nearest anchored ancestor, minus the
    options that no path of non-domain vertices can realise.

    Args:
        tree (RootedSpanningTree): the rooted tree.
        anchors (AbstractSet[int]): the anchor set `B`. Must contain the root and
            every vertex of tree-degree at least 3.
        root_value (int): the value of the root.
        root_in_domain (bool): whether the root belongs to `A`.
        value_range (Optional[ValueRange], optional): restricts every value on
            `A ∪ B`. Defaults to None.
        domain_size (Optional[int], optional): only yield prototypes with `|A|`
            equal to this. Defaults to None.

    Raises:
        ValueError: if `anchors` is not a valid anchor set of `tree`.
    """
    anchor_set = frozenset(anchors)
    _check_anchors(tree, anchor_set)
    if value_range is not None and root_value not in value_range:
        return

    order = tree.order
    values: Dict[int, int] = {tree.root: root_value}
    in_domain: Dict[int, bool] = {tree.root: root_in_domain}
    nearest: Dict[int, Tuple[int, int]] = {}

    def visit(i: int, size: int) -> Iterator[Prototype]:
        remaining = len(order) - i
        if domain_size is not None and not size <= domain_size <= size + remaining:
            return
        if i == len(order):
            domain = frozenset(v for v, member in in_domain.items() if member)
            yield Prototype(domain=domain, anchors=anchor_set, values=dict(values))
            return
        v = order[i]
        p = tree.parent[v]
        assert p is not None
        w, dist = (p, 1) if p in values else (nearest[p][0], nearest[p][1] + 1)
        nearest[v] = (w, dist)
        for member in (True, False):
            in_domain[v] = member
            if not member and v not in anchor_set:
                yield from visit(i + 1, size)
                continue
            admissible = _admissible_values(
                values[w], dist, in_domain[w], member, value_range
            )
            for value in admissible:
                values[v] = value
                yield from visit(i + 1, size + int(member))
            values.pop(v, None)
        del in_domain[v]
        del nearest[v]

    yield from visit(1, int(root_in_domain))


def count_prototypes(
    tree: RootedSpanningTree,
    anchors: AbstractSet[int],
    root_value: int,
    root_in_domain: bool,
    value_range: Optional[ValueRange] = None,
    exclude_from_domain: Iterable[int] = (),
) -> int:
    """The number of prototypes :func:`enumerate_prototypes` would yield.

    Counted by a memoised recursion over the tree, without generating them.

    Args:
        exclude_from_domain (Iterable[int], optional): only count prototypes whose
            domain avoids these vertices. Defaults to ().
    """
    anchor_set = frozenset(anchors)
    _check_anchors(tree, anchor_set)
    excluded = frozenset(exclude_from_domain)
    if value_range is not None and root_value not in value_range:
        return 0
    if root_in_domain and tree.root in excluded:
        return 0

    @lru_cache(maxsize=None)
    def anchored(v: int, member: bool, value: int) -> int:
        total = 1
        for child in tree.children(v):
            total *= chain(child, 1, member, value)
        return total

    @lru_cache(maxsize=None)
    def chain(v: int, dist: int, base_member: bool, base_value: int) -> int:
        ways = 0
        for member in (True, False):
            if member and v in excluded:
                continue
            if not member and v not in anchor_set:
                children = tree.children(v)
                if children:
                    ways += chain(children[0], dist + 1, base_member, base_value)
                else:
                    ways += 1
                continue
            for value in _admissible_values(
                base_value, dist, base_member, member, value_range
            ):
                ways += anchored(v, member, value)
        return ways

    return anchored(tree.root, root_in_domain, root_value)


def path_tree(n: int) -> RootedSpanningTree:
    """The path `1 - 2 - ... - (n + 1)` with `n` edges, rooted at vertex 1."""
    if n < 1:
        raise ValueError(f"a path needs at least one edge, got n={n}")
    path = Graph.from_edges(n + 1, [(v, v + 1) for v in range(1, n + 1)])
    return rooted_spanning_tree(path)


def count_path_prototypes(kind: str, n: int, far_end_outside: bool = False) -> int:
    """Counts the prototypes of a path with `n` edges by the tree recursion.

    Args:
        kind (str): `'T'`/`"T'"` anchors the root only, `'S'`/`"S'"` both ends;
            unprimed kinds put the root in the domain.
        n (int): the number of path edges.
        far_end_outside (bool, optional): only count prototypes whose domain misses
            the far end of the path. Defaults to False.
    """
    if kind not in PATH_PROTOTYPE_KINDS:
        raise ValueError(
            f"unknown prototype kind '{kind}', expected one of {PATH_PROTOTYPE_KINDS}"
        )
    tree = path_tree(n)
    anchors = {1, n + 1} if kind.startswith("S") else {1}
    excluded = (n + 1,) if far_end_outside else ()
    return count_prototypes(
        tree, anchors, 0, not kind.endswith("'"), exclude_from_domain=excluded
    )


@lru_cache(maxsize=None)
def prototype_recurrence(kind: str, n: int) -> int:
    """Closed recurrences for the prototype counts of a path with `n` edges.

    `'T'`/`"T'"`: anchored at the root end only, root in/out of the domain.
    `'S'`/`"S'"`: anchored at both ends, root in/out of the domain.
    """
    if kind not in PATH_PROTOTYPE_KINDS:
        raise ValueError(
            f"unknown prototype kind '{kind}', expected one of {PATH_PROTOTYPE_KINDS}"
        )
    if n < 1:
        raise ValueError(f"a path needs at least one edge, got n={n}")

    def t(m: int) -> int:
        return 1 if m == 0 else prototype_recurrence("T", m)

    def s(m: int) -> int:
        return prototype_recurrence("S", m)

    if kind == "T":
        return 3 * t(n - 1) + sum((2 * k - 1) * t(n - k) for k in range(2, n + 1)) + 1
    if kind == "T'":
        return 2 * t(n - 1) + sum(2 * k * t(n - k) for k in range(2, n + 1)) + 1
    if n == 1:
        return 5
    middle = range(2, n)
    if kind == "S":
        return 3 * s(n - 1) + sum((2 * k - 1) * s(n - k) for k in middle) + 4 * n - 1
    return 2 * s(n - 1) + sum(2 * k * s(n - k) for k in middle) + 4 * n + 1


def _connected_pbfs(
    g: Graph, N: int, domain_size: Optional[int]
) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
    tree = rooted_spanning_tree(g)
    anchors = tree.branching_vertices() | {tree.root}
    value_range = ValueRange(1, N)
    for root_value in value_range:
        for root_in_domain in (True, False):
            for prototype in enumerate_prototypes(
                tree, anchors, root_value, root_in_domain, value_range, domain_size
            ):
                pbf = prototype.pbf
                witness = complete_extension(g, pbf, prototype.values, value_range)
                if witness is not None:
                    yield pbf, witness


def _combine_components(
    parts: List[Tuple[Graph, Tuple[int, ...]]],
    N: int,
    remaining: Optional[int],
    pbf: Dict[int, int],
    witness: Dict[int, int],
) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
    if not parts:
        if remaining is None or remaining == 0:
            yield dict(pbf), dict(witness)
        return
    (sub, labels), rest = parts[0], parts[1:]
    sizes: List[Optional[int]] = (
        [None] if remaining is None else list(range(min(remaining, sub.n) + 1))
    )
    for size in sizes:
        for sub_pbf, sub_witness in _connected_pbfs(sub, N, size):
            yield from _combine_components(
                rest,
                N,
                None if remaining is None or size is None else remaining - size,
                {**pbf, **{labels[v - 1]: x for v, x in sub_pbf.items()}},
                {**witness, **{labels[v - 1]: x for v, x in sub_witness.items()}},
            )


def enumerate_partial_bucket_functions(
    g: Graph, N: int, domain_size: Optional[int] = None
) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
    """Yields every partial bucket function with a bucket extension into `{1..N}`.

    Prototypes are generated on the rooted spanning tree of `g` (anchored at the root
    and the branching vertices) for every root value and root membership, and each is
    checked against `g` itself. A partial bucket function is yielded once per
    prototype that maps to it, so duplicates occur; deduplicate with
    :func:`bucketwidth.bucket.pbf_key` if needed. Disconnected graphs are handled by
    combining the enumerations of their components.

    Args:
        g (Graph): the graph.
        N (int): the largest extension value.
        domain_size (Optional[int], optional): only yield partial bucket functions
            with `|A|` equal to this. Defaults to None.

    Returns:
        Iterator[Tuple[Dict[int, int], Dict[int, int]]]: pairs of a partial bucket
        function and a witnessing bucket extension.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    components = connected_components(g)
    if len(components) == 1:
        yield from _connected_pbfs(g, N, domain_size)
        return
    logger.debug("enumerating pbfs over %d components", len(components))
    parts = [induced_subgraph(g, component) for component in components]
    yield from _combine_components(parts, N, domain_size, {}, {})


__all__ = generate__all__(__name__)
