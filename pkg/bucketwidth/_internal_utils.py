# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

import inspect
import logging
import os
import sys
from typing import List

logger = logging.getLogger(__name__)

SIZE_GUARD_ENV = "BUCKETWIDTH_SIZE_GUARD"


def generate__all__(module_name: str, include_imports: bool = False) -> List[str]:
    """Generates the contents of __all__ by extracting every public function/class/etc.
    except those imported from other modules. Necessary for Sphinx docs."""
    module = sys.modules[module_name]
    all = []
    for name, member in inspect.getmembers(module):
        # Skip members imported from other modules and private members
        is_local = inspect.getmodule(member) == module
        if (include_imports or is_local) and not name.startswith("_"):
            all.append(name)
    return all


def size_guard(default: int) -> int:
    """Returns the vertex-count guard for exhaustive routines.

    The `BUCKETWIDTH_SIZE_GUARD` environment variable, when set, replaces every
    default guard.

    Args:
        default (int): the guard used when the environment variable is unset.

    Raises:
        ValueError: if the environment variable is not a positive integer.

    Returns:
        int: the guard in effect.
    """
    raw = os.environ.get(SIZE_GUARD_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(
            f"{SIZE_GUARD_ENV} must be a positive integer, got '{raw}'"
        ) from None
    if value < 1:
        raise ValueError(f"{SIZE_GUARD_ENV} must be a positive integer, got '{raw}'")
    if value > default:
        logger.warning(
            "size guard raised from %d to %d via %s", default, value, SIZE_GUARD_ENV
        )
    return value


class SizeGuardError(ValueError):
    """An exhaustive routine was asked to run beyond its size guard."""


def check_size_guard(what: str, n: int, default: int) -> None:
    """Raises :class:`SizeGuardError` if `n` exceeds the guard for `what`."""
    guard = size_guard(default)
    if n > guard:
        raise SizeGuardError(
            f"{what} refuses n={n} > {guard} (set {SIZE_GUARD_ENV} to override)"
        )
