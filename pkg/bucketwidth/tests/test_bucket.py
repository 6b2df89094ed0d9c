# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

import itertools
from typing import Dict, Iterator

import pytest

from .. import bucket
from ..bandwidth import solve_expspace, solve_polyspace
from ..bucket import (
    InconsistentPinsError,
    ValueRange,
    complete_extension,
    count_triples_bruteforce,
    enumerate_bucket_extensions,
    is_partial_bucket_function,
    is_successor,
    memoised_pbf_checks,
    pbf_key,
)
from ..graph import Graph
from .helper import (
    assert_bucket_extension,
    atlas,
    complete,
    extensions_in_window,
    graph_id,
    path,
)


def candidate_pbfs(g: Graph, values: ValueRange) -> Iterator[Dict[int, int]]:
    for size in range(g.n + 1):
        for domain in itertools.combinations(g.vertices, size):
            for assignment in itertools.product(values, repeat=size):
                yield dict(zip(domain, assignment))


def test_value_range() -> None:
    r = ValueRange(-1, 2)
    assert list(r) == [-1, 0, 1, 2]
    assert len(r) == 4
    assert 2 in r and 3 not in r
    with pytest.raises(ValueError):
        ValueRange(2, 1)


def test_complete_extension() -> None:
    edge = path(2)
    assert complete_extension(edge, {1: 0}) == {1: 0, 2: -1}
    assert complete_extension(path(3), {1: 0, 3: 2}) is None
    assert complete_extension(path(3), {}) == {1: 0, 2: 0, 3: 0}
    assert complete_extension(edge, {1: 1, 2: 1}) == {1: 1, 2: 1}

    # a pin outside A does not join the domain
    ext = complete_extension(path(3), {1: 0}, pinned={3: -2})
    assert ext == {1: 0, 2: -1, 3: -2}
    assert complete_extension(edge, {1: 0}, value_range=ValueRange(1, 3)) is None
    assert complete_extension(edge, {1: 2}, value_range=ValueRange(1, 3)) == {
        1: 2,
        2: 1,
    }


def test_complete_extension_errors() -> None:
    with pytest.raises(InconsistentPinsError) as e:
        complete_extension(path(2), {1: 0}, pinned={1: 1})
    assert "disagrees" in str(e.value)
    with pytest.raises(ValueError):
        complete_extension(path(2), {3: 0})


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("g", atlas(6, connected=False), ids=graph_id)
def test_complete_extension_matches_exhaustion(g: Graph, N: int) -> None:
    value_range = ValueRange(1, N)
    for f in candidate_pbfs(g, value_range):
        expected = extensions_in_window(g, f, value_range)
        ext = complete_extension(g, f, value_range=value_range)
        assert (ext is not None) == bool(expected), f
        if ext is not None:
            assert_bucket_extension(g, f, ext, value_range)
            assert pbf_key(ext) in expected

        extensions = list(enumerate_bucket_extensions(g, f, value_range))
        keys = [pbf_key(e) for e in extensions]
        assert len(set(keys)) == len(keys)
        assert set(keys) == expected


@pytest.mark.parametrize("g", atlas(6), ids=graph_id)
def test_unbounded_extensions_match_window(g: Graph) -> None:
    # every extension of an anchored connected graph stays within n of f
    for f in candidate_pbfs(g, ValueRange(1, 2)):
        if not f:
            continue
        window = ValueRange(min(f.values()) - g.n, max(f.values()) + g.n)
        expected = extensions_in_window(g, f, window)
        assert is_partial_bucket_function(g, f) == bool(expected)
        found = {pbf_key(e) for e in enumerate_bucket_extensions(g, f)}
        assert found == expected


def test_enumerate_bucket_extensions() -> None:
    assert sorted(e[2] for e in enumerate_bucket_extensions(path(2), {1: 0})) == [
        -1,
        0,
    ]
    total = {1: 0, 2: 1, 3: 1}
    assert list(enumerate_bucket_extensions(path(3), total)) == [total]

    seeded = list(enumerate_bucket_extensions(path(2), {}, seed=(1, 0)))
    assert sorted(e[2] for e in seeded) == [-1, 0, 1]

    with pytest.raises(ValueError) as e:
        list(enumerate_bucket_extensions(path(2), {}))
    assert "has no fixed vertex" in str(e.value)
    with pytest.raises(ValueError):
        list(enumerate_bucket_extensions(Graph(2), {1: 0}))

    assert list(enumerate_bucket_extensions(path(3), {1: 0, 3: 2})) == []


def test_is_partial_bucket_function() -> None:
    edge = path(2)
    assert not is_partial_bucket_function(edge, {1: 0, 2: 2})
    assert is_partial_bucket_function(edge, {1: 0, 2: 1})
    assert not is_partial_bucket_function(path(3), {1: 0, 3: 2})
    assert is_partial_bucket_function(complete(4), {})


def test_memoised_pbf_checks() -> None:
    with memoised_pbf_checks() as memo:
        assert is_partial_bucket_function(path(3), {1: 1, 3: 1})
        assert not is_partial_bucket_function(path(3), {1: 0, 3: 2})
        assert len(memo) == 2
        with memoised_pbf_checks() as inner:
            assert inner is memo
            assert is_partial_bucket_function(path(3), {1: 1, 3: 1})
        assert len(memo) == 2
    with memoised_pbf_checks() as fresh:
        assert fresh == {}

    # no table outlives a search
    assert solve_expspace(path(5), 1) is not None
    assert solve_polyspace(path(5), 1) is not None
    assert bucket._pbf_memo is None


def test_is_successor() -> None:
    edge = path(2)
    assert is_successor(edge, {}, {1: 1})
    assert not is_successor(edge, {1: 1}, {1: 1, 2: 2})
    assert is_successor(edge, {1: 1}, {1: 1, 2: 1})
    assert is_successor(edge, {1: 1}, {1: 1, 2: 0})
    assert not is_successor(edge, {1: 1}, {1: 2, 2: 1})
    assert not is_successor(path(3), {}, {1: 1, 2: 1})
    assert not is_successor(path(3), {1: 0}, {1: 0, 3: 2})


def triples_by_exhaustion(g: Graph, N: int) -> int:
    total = 0
    for values in itertools.product(range(1, N + 1), repeat=g.n):
        ext = dict(zip(g.vertices, values))
        if any(abs(ext[u] - ext[v]) > 1 for u, v in g.edges):
            continue
        for size in range(g.n + 1):
            for domain in map(set, itertools.combinations(g.vertices, size)):
                total += all(
                    ext[u] >= ext[v]
                    for a, b in g.edges
                    for u, v in ((a, b), (b, a))
                    if u in domain and v not in domain
                )
    return total


def test_count_triples_bruteforce() -> None:
    assert count_triples_bruteforce(path(2), 1) == 4
    assert count_triples_bruteforce(Graph(1), 3) == 6


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("g", atlas(6, connected=False), ids=graph_id)
def test_count_triples_matches_exhaustion(g: Graph, N: int) -> None:
    assert count_triples_bruteforce(g, N) == triples_by_exhaustion(g, N)


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("g", atlas(6), ids=graph_id)
def test_count_triples_bound(g: Graph, N: int) -> None:
    assert count_triples_bruteforce(g, N) <= 2 * N * 5 ** (g.n - 1)
