# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

from ..bandwidth import solve_bandwidth, solve_expspace, solve_polyspace
from ..distortion import minimize_distortion, solve_extended_polyspace
from ..docs import docstring_from, format_docstring


def reference(a: int, b: int = 2) -> int:
    """Adds two numbers.

    Args:
        a (int): the first.
        b (int, optional): the second. Defaults to 2.

    Returns:
        int: the sum.
    """
    return a + b


def test_docstring_from() -> None:
    @docstring_from(
        reference,
        short_description="Adds three numbers.",
        add_args=["c (int, optional): the third. Defaults to 0."],
    )
    def adapted(a: int, b: int = 2, c: int = 0) -> int:
        return a + b + c

    doc = adapted.__doc__
    assert doc is not None
    assert doc.startswith("Adds three numbers.")
    assert "the first." in doc
    assert "the third." in doc
    assert "the sum." in doc
    assert adapted(1, 2, 3) == 6


def test_format_docstring() -> None:
    @format_docstring("bound", "graph")
    def f() -> None:
        """Checks the {0} of a {1}."""

    assert f.__doc__ == "Checks the bound of a graph."

    @format_docstring("unused")
    def g() -> None:
        pass

    assert g.__doc__ is None


def test_solver_docstrings() -> None:
    assert solve_bandwidth.__doc__ is not None
    assert "['expspace', 'polyspace']" in solve_bandwidth.__doc__
    assert "{0}" not in solve_bandwidth.__doc__

    assert solve_polyspace.__doc__ is not None
    assert solve_expspace.__doc__ is not None
    assert solve_polyspace.__doc__ != solve_expspace.__doc__
    assert "full_range" in solve_polyspace.__doc__
    assert solve_extended_polyspace.__doc__ is not None
    assert "dedup" in solve_extended_polyspace.__doc__

    assert minimize_distortion.__doc__ is not None
    assert "r_threshold" in minimize_distortion.__doc__
