# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Docstring templating shared by the solver front-ends."""

from typing import Any, Callable, List, Optional, TypeVar

from docstring_parser.google import (
    DEFAULT_SECTIONS,
    GoogleParser,
    Section,
    SectionType,
    compose,
)

T = TypeVar("T")


def _get_docstring_from_target(
    source: T,
    target: Any,
    short_description: Optional[str] = None,
    long_description: Optional[str] = None,
    add_args: Optional[List[str]] = None,
) -> T:
    """Takes the docstring from `target`, modifies it, and applies it to `source`."""

    parser_sections = DEFAULT_SECTIONS + [
        Section("Examples:", "examples", SectionType.SINGULAR),
    ]
    parser = GoogleParser(sections=parser_sections)
    docstring = parser.parse(target.__doc__)
    if short_description is not None:
        docstring.short_description = short_description
    if long_description is not None:
        docstring.long_description = long_description

    if add_args:
        for arg_str in add_args:
            # Parse the additional args strings and add them to the docstring object
            param_meta = parser._build_meta(arg_str, "Args")
            docstring.meta.append(param_meta)

    source.__doc__ = compose(docstring)  # docstring object to actual string
    return source


def docstring_from(
    target: Callable[..., Any],
    short_description: Optional[str] = None,
    long_description: Optional[str] = None,
    add_args: Optional[List[str]] = None,
) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """Returns a decorator which causes the wrapped object to take the docstring from
    the target object, with the specified modifications applied.

    Args:
        target (Any): The object to take the docstring from.
        short_description (Optional[str], optional): Replaces the top one-line
            description in the target docstring with the one supplied. Defaults to
            None (keep the target's).
        long_description (Optional[str], optional): Replaces the body of the target
            docstring. Defaults to None (keep the target's).
        add_args (Optional[List[str]], optional): Appends the supplied argument strings
            to the list of arguments. Defaults to None.

    Returns:
        Callable[[Callable], Callable]: The decorator used to wrap the child object.
    """

    def decorator(source: Callable[..., T]) -> Callable[..., T]:
        return _get_docstring_from_target(
            source=source,
            target=target,
            short_description=short_description,
            long_description=long_description,
            add_args=add_args,
        )

    return decorator


def format_docstring(*args: str) -> Callable[[T], T]:
    """Returns a decorator that applies `obj.__doc__.format(*args)` to the target.

    Args:
        args: (*str): The arguments to be passed to the docstrings `.format()` method.

    Returns:
        Callable[[T], T]: A decorator to format the docstring.
    """

    def f(obj: T) -> T:
        if isinstance(obj.__doc__, str):
            obj.__doc__ = obj.__doc__.format(*args)
        return obj

    return f


bandwidth_algo_docstring = (
    "algo (str, optional): The name of the decision procedure. Must be one of:"
    " ['expspace', 'polyspace']. `expspace` memoises every visited state,"
    " `polyspace` splits the search at a middle layer and keeps only polynomially"
    " many states."
    " Defaults to `expspace`."
)

distortion_algo_docstring = (
    "algo (str, optional): The name of the extended-instance solver. Must be one of:"
    " ['expspace', 'polyspace']. Defaults to `expspace`."
)

r_threshold_docstring = (
    "r_threshold (Optional[int], optional): instances with at most this many"
    " nonempty segments are solved directly, larger ones are first split at a pair"
    " of middle segments. Defaults to None (always solve directly)."
)
