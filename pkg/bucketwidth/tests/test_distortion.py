# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

import itertools
from fractions import Fraction
from typing import Callable, Dict, Optional

import pytest

from ..distortion import (
    DISTORTION_ALGORITHMS,
    DistortionState,
    ExtendedInstance,
    SegmentGuess,
    dist_state_successors,
    embedding_from_states,
    embedding_metrics,
    enumerate_segment_guesses,
    expansion_at_most,
    is_final_state,
    is_pushing,
    minimize_distortion,
    pushing_positions,
    satisfies_distortion_segments,
    solve_distortion,
    solve_extended,
    solve_extended_expspace,
    solve_extended_polyspace,
    split_segments,
    split_size_cap,
    trace_states,
)
from ..graph import Graph
from ..layout import DistortionLayout
from ..oracle import distortion_bruteforce
from ..stats import SearchStats
from .helper import (
    assert_pushing_embedding,
    atlas,
    complete,
    cycle,
    graph_id,
    path,
    star,
)


def test_pushing_positions() -> None:
    assert pushing_positions(path(3), [1, 2, 3]) == {1: 0, 2: 1, 3: 2}
    assert pushing_positions(star(3), [2, 1, 3, 4]) == {2: 0, 1: 1, 3: 2, 4: 4}
    assert pushing_positions(cycle(4), [1, 2, 3, 4]) == {1: 0, 2: 1, 3: 2, 4: 3}

    with pytest.raises(ValueError) as e:
        pushing_positions(path(3), [1, 2])
    assert "not a permutation" in str(e.value)
    with pytest.raises(ValueError) as e:
        pushing_positions(Graph(2), [1, 2])
    assert "connected" in str(e.value)


def test_embedding_metrics() -> None:
    assert embedding_metrics(complete(3), {1: 0, 2: 1, 3: 2}) == (1, 2, 2)
    assert embedding_metrics(path(3), {1: 0, 2: 1, 3: 2}) == (1, 1, 1)
    assert embedding_metrics(cycle(4), {1: 0, 2: 1, 3: 2, 4: 3}) == (1, 3, 3)
    assert embedding_metrics(Graph(1), {1: 5}) == (1, 1, 1)
    # the first edge stretched to twice its length
    contraction, expansion, distortion = embedding_metrics(path(3), {1: 0, 2: 2, 3: 3})
    assert (contraction, expansion) == (Fraction(1), Fraction(2))
    assert distortion == 2

    with pytest.raises(ValueError) as e:
        embedding_metrics(path(2), {1: 0, 2: 0})
    assert "two vertices at one position" in str(e.value)
    with pytest.raises(ValueError):
        embedding_metrics(path(2), {1: 0})


def test_expansion_and_pushing() -> None:
    pi = {1: 0, 2: 1, 3: 2, 4: 3}
    assert is_pushing(cycle(4), pi)
    assert expansion_at_most(cycle(4), pi, 3)
    assert not expansion_at_most(cycle(4), pi, 2)
    assert not is_pushing(path(3), {1: 0, 2: 2, 3: 3})


def test_satisfies_distortion_segments_examples() -> None:
    assert satisfies_distortion_segments(
        path(3), DistortionLayout(2, 1), {1: 1, 2: 2, 3: 3}
    )
    assert not satisfies_distortion_segments(
        cycle(4), DistortionLayout(2, 2), {1: 1, 2: 2, 3: 3, 4: 4}
    )
    with pytest.raises(ValueError) as e:
        satisfies_distortion_segments(path(2), DistortionLayout(1, 1), {1: 0, 2: 1})
    assert "outside positions" in str(e.value)


@pytest.mark.parametrize("g", atlas(5), ids=graph_id)
def test_satisfies_distortion_segments(g: Graph) -> None:
    if g.n == 1:
        return
    for order in itertools.permutations(g.vertices):
        pi = {v: q + 1 for v, q in pushing_positions(g, order).items()}
        expansion = embedding_metrics(g, pi)[1]
        for d in range(1, 2 * g.n):
            r = -(-max(pi.values()) // (d + 1))
            layout = DistortionLayout(d, r)
            assert satisfies_distortion_segments(g, layout, pi) == (expansion <= d)


def test_extended_instance() -> None:
    g = path(4)
    instance = ExtendedInstance.with_pins(g, [2, 3, 4], 1, {2: 0})
    assert instance.free == (3, 4)
    assert instance.left_pins == [(2, 0)]
    assert instance.right_pins == []
    sub, labels = instance.free_subgraph
    assert labels == (3, 4)
    assert sub == path(2)
    instance.check_for(1)

    with pytest.raises(ValueError) as e:
        ExtendedInstance.with_pins(g, [2, 3], 1, {1: 0})
    assert "must belong to X" in str(e.value)
    with pytest.raises(ValueError):
        ExtendedInstance.whole(g, -1)
    with pytest.raises(ValueError) as e:
        ExtendedInstance.with_pins(g, [2, 3, 4], 1, {2: 1}).check_for(1)
    assert "outside segments" in str(e.value)
    with pytest.raises(ValueError) as e:
        ExtendedInstance.whole(Graph(2), 1).check_for(1)
    assert "disconnected" in str(e.value)
    with pytest.raises(ValueError):
        instance.check_for(0)


def test_distortion_state() -> None:
    state = DistortionState.initial(2)
    assert state == DistortionState(0, frozenset(), (None, None))
    assert state.f == {} and state.h == {}
    moved = DistortionState(3, frozenset({(1, 1), (2, 2)}), ((1, 1), (2, 4))).at(5)
    assert moved.p == 5
    assert moved.f == {1: 1, 2: 2}
    assert moved.h == {1: 1, 2: 4}

    guess = SegmentGuess(((1, 2), (3, 4)))
    assert guess.head(2) == (3, 4)
    assert guess.position_of == {1: 2, 3: 4}
    assert guess.head_positions == frozenset({2, 4})


def test_dist_state_successors() -> None:
    instance = ExtendedInstance.whole(path(2), 1)
    layout = DistortionLayout(1, 1)
    guess = SegmentGuess(((1, 1),))
    start = DistortionState.initial(1)
    (first,) = dist_state_successors(instance, layout, guess, start)
    assert first == DistortionState(1, frozenset({(1, 1)}), ((1, 1),))

    successors = dist_state_successors(instance, layout, guess, first)
    final = DistortionState(2, frozenset({(1, 1), (2, 1)}), ((2, 2),))
    assert final in successors
    assert is_final_state(instance, layout, guess, final)
    assert not is_final_state(instance, layout, guess, first.at(2))
    assert dist_state_successors(instance, layout, guess, final) == []


def test_dist_state_successors_rejects_gaps() -> None:
    # 1 and 3 are two apart in the graph, so 3 cannot sit right after 1
    instance = ExtendedInstance.whole(path(3), 1)
    layout = DistortionLayout(3, 1)
    guess = SegmentGuess(((1, 1),))
    state = DistortionState(1, frozenset({(1, 1)}), ((1, 1),))
    successors = dist_state_successors(instance, layout, guess, state)
    assert DistortionState(2, frozenset({(1, 1), (2, 1)}), ((2, 2),)) in successors
    assert all(3 not in s.f for s in successors)


def test_enumerate_segment_guesses() -> None:
    # the second head can only sit right after the first, at the segment border
    instance = ExtendedInstance.whole(path(2), 2)
    assert list(enumerate_segment_guesses(instance, 1)) == [
        SegmentGuess(((1, 2), (2, 3))),
        SegmentGuess(((2, 2), (1, 3))),
    ]
    guesses = list(enumerate_segment_guesses(ExtendedInstance.whole(path(2), 1), 1))
    assert SegmentGuess(((1, 1),)) in guesses
    assert list(enumerate_segment_guesses(ExtendedInstance.whole(path(2), 3), 1)) == []


@pytest.mark.parametrize("solve", [solve_extended_expspace, solve_extended_polyspace])
def test_solve_extended_examples(
    solve: Callable[[ExtendedInstance, int], Optional[Dict[int, int]]]
) -> None:
    p3 = solve(ExtendedInstance.whole(path(3), 1), 2)
    assert p3 is not None and sorted(p3.values()) == [1, 2, 3]
    assert_pushing_embedding(path(3), p3, 2)
    assert solve(ExtendedInstance.whole(path(2), 2), 1) in (
        {1: 2, 2: 3},
        {1: 3, 2: 2},
    )
    k3 = solve(ExtendedInstance.whole(complete(3), 1), 2)
    assert_pushing_embedding(complete(3), k3, 2)
    assert solve(ExtendedInstance.whole(path(3), 4), 1) is None
    assert solve(ExtendedInstance.whole(path(4), 1), 1) is None


def test_solve_extended_with_pins() -> None:
    g = path(4)
    instance = ExtendedInstance.with_pins(g, [1, 2, 3, 4], 1, {1: 0, 4: 3})
    assert solve_extended_expspace(instance, 1) == {1: 0, 2: 1, 3: 2, 4: 3}
    assert solve_extended_polyspace(instance, 1) == {1: 0, 2: 1, 3: 2, 4: 3}
    # nothing left to place, the pins must push each other
    pushed = ExtendedInstance.with_pins(g, [1, 2], 0, {1: 0, 2: 1})
    assert solve_extended_expspace(pushed, 1) == {1: 0, 2: 1}
    too_close = ExtendedInstance.with_pins(g, [1, 3], 0, {1: 0, 3: 1})
    assert solve_extended_expspace(too_close, 1) is None


@pytest.mark.parametrize("algo", list(DISTORTION_ALGORITHMS))
def test_solve_distortion_examples(algo: str) -> None:
    assert_pushing_embedding(path(4), solve_distortion(path(4), 1, algo), 1)
    assert solve_distortion(cycle(4), 2, algo) is None
    assert_pushing_embedding(cycle(4), solve_distortion(cycle(4), 3, algo), 3)
    assert solve_distortion(star(3), 2, algo) is None
    assert_pushing_embedding(star(3), solve_distortion(star(3), 3, algo), 3)
    assert solve_distortion(Graph(1), 1, algo) == {1: 1}
    assert solve_distortion(Graph(2), 5, algo) is None


def test_solve_distortion_errors() -> None:
    with pytest.raises(ValueError) as e:
        solve_distortion(path(2), 0)
    assert "must be positive" in str(e.value)
    with pytest.raises(ValueError) as e:
        solve_distortion(path(2), 1, "dynamic")
    assert "unknown distortion algorithm 'dynamic'" in str(e.value)
    with pytest.raises(ValueError) as e:
        minimize_distortion(Graph(2))
    assert "disconnected" in str(e.value)


@pytest.mark.parametrize(
    "g, expected",
    [(path(6), 1), (complete(4), 3), (cycle(5), 4), (Graph(1), 1)],
    ids=["P6", "K4", "C5", "K1"],
)
def test_minimize_distortion(g: Graph, expected: int) -> None:
    value, embedding = minimize_distortion(g)
    assert value == expected
    assert_pushing_embedding(g, embedding, expected)
    assert embedding_metrics(g, embedding)[2] == expected


connected_up_to_six = atlas(6)


@pytest.mark.parametrize("g", connected_up_to_six, ids=graph_id)
def test_expspace_matches_bruteforce(g: Graph) -> None:
    expected = distortion_bruteforce(g)
    assert expected is not None
    stats = SearchStats()
    value, embedding = minimize_distortion(g, "expspace", stats=stats)
    assert value == expected[0]
    assert_pushing_embedding(g, embedding, value)
    assert min(embedding.values()) >= 1


@pytest.mark.parametrize("g", connected_up_to_six, ids=graph_id)
def test_split_matches_bruteforce(g: Graph) -> None:
    expected = distortion_bruteforce(g)
    assert expected is not None
    value, embedding = minimize_distortion(g, r_threshold=0)
    assert value == expected[0]
    assert_pushing_embedding(g, embedding, value)


@pytest.mark.parametrize("g", connected_up_to_six, ids=graph_id)
def test_polyspace_matches_bruteforce(g: Graph) -> None:
    expected = distortion_bruteforce(g)
    assert expected is not None
    stats = SearchStats()
    value, embedding = minimize_distortion(g, "polyspace", stats=stats)
    assert value == expected[0]
    assert_pushing_embedding(g, embedding, value)
    assert stats.table_size == 0


@pytest.mark.parametrize("g", atlas(4), ids=graph_id)
def test_polyspace_dedup_agrees(g: Graph) -> None:
    instance = ExtendedInstance.whole(g, 1)
    for d in range(max(1, g.n - 1), g.n + 1):
        found = solve_extended_expspace(instance, d) is not None
        for dedup in (False, True):
            direct = solve_extended_polyspace(instance, d, dedup=dedup)
            assert (direct is not None) == found, (d, dedup)


def test_split_arithmetic() -> None:
    assert list(split_segments(1)) == []
    assert list(split_segments(2)) == [1]
    assert list(split_segments(4)) == [1, 2, 3]
    assert list(split_segments(8)) == [2, 3, 4, 5, 6]
    assert split_size_cap(10, 1) == 0
    assert split_size_cap(4, 4) == 2
    assert split_size_cap(12, 8) == 3


def test_solve_extended_split_matches_direct() -> None:
    for g in [path(5), cycle(5), star(3), complete(4)]:
        for d in range(1, g.n + 1):
            for r in range(1, g.n + 1):
                instance = ExtendedInstance.whole(g, r)
                direct = solve_extended(instance, d)
                split = solve_extended(instance, d, r_threshold=1)
                assert (direct is None) == (split is None), (graph_id(g), d, r)
                if split is not None:
                    assert_pushing_embedding(g, split, d)


def shift_to_one(pi: Dict[int, int]) -> Dict[int, int]:
    low = min(pi.values())
    return {v: q - low + 1 for v, q in pi.items()}


@pytest.mark.parametrize("g", atlas(4) + [cycle(5), star(4)], ids=graph_id)
def test_optimal_embeddings_trace_through_states(g: Graph) -> None:
    expected = distortion_bruteforce(g)
    assert expected is not None
    d, pi = expected[0], shift_to_one(expected[1])
    r = -(-max(pi.values()) // (d + 1))
    instance = ExtendedInstance.whole(g, r)
    layout = DistortionLayout(d, r)

    guess, states = trace_states(instance, d, pi)
    assert guess in set(enumerate_segment_guesses(instance, d))
    assert states[0] == DistortionState.initial(r)
    for state, nxt in zip(states, states[1:]):
        assert nxt in dist_state_successors(instance, layout, guess, state)
    assert is_final_state(instance, layout, guess, states[-1])
    assert embedding_from_states(states, instance) == pi

    for state in states:
        assert guess in set(enumerate_segment_guesses(instance, d, within=state.f))


def test_trace_states_errors() -> None:
    instance = ExtendedInstance.whole(path(2), 2)
    with pytest.raises(ValueError) as e:
        trace_states(instance, 1, {1: 1, 2: 2})
    assert "segment 2 is empty" in str(e.value)
    with pytest.raises(ValueError) as e:
        trace_states(instance, 1, {1: 1, 2: 5})
    assert "is not a valid free position" in str(e.value)
