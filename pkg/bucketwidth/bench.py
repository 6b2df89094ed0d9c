# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""Timed solver runs, their reports and the corpus benchmark."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from tabulate import tabulate

from ._internal_utils import generate__all__
from .bandwidth import (
    BANDWIDTH_ALGORITHMS,
    bandwidth_of,
    minimize_bandwidth,
    solve_bandwidth,
)
from .distortion import (
    DISTORTION_ALGORITHMS,
    embedding_metrics,
    minimize_distortion,
    solve_distortion,
)
from .graph import Graph, is_connected, read_graph
from .oracle import bandwidth_bruteforce, distortion_bruteforce
from .stats import SearchStats

logger = logging.getLogger(__name__)

PROBLEMS = ("bandwidth", "distortion")
CERTIFICATE_KEYS = {"bandwidth": "ordering", "distortion": "embedding"}
CORPUS_SUFFIXES = {".txt": "edgelist", ".col": "dimacs"}


@dataclass
class RunReport:
    """The outcome of one solver run.

    Args:
        problem (str): `bandwidth` or `distortion`.
        algorithm (str): the solver (`bruteforce`, `expspace` or `polyspace`).
        instance (str): the input name.
        n (int): the number of vertices.
        feasible (bool): whether the bound holds, or an optimum was found.
        value (Optional[int]): the optimum, or the bound when feasible.
        certificate (Optional[Dict[int, int]]): an ordering or embedding, present
            iff `feasible`.
        seconds (float): wall time of the solver call.
        peak_states (int): the largest number of states held at once.
        expanded (int): states whose successors were generated.
        verified (Optional[bool]): agreement with the brute-force oracle, `None`
            unless verification ran.
    """

    problem: str
    algorithm: str
    instance: str
    n: int
    feasible: bool
    value: Optional[int]
    certificate: Optional[Dict[int, int]]
    seconds: float
    peak_states: int = 0
    expanded: int = 0
    verified: Optional[bool] = None

    def __post_init__(self) -> None:
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem '{self.problem}', expected {PROBLEMS}")
        if (self.certificate is not None) != self.feasible:
            raise ValueError("a certificate must be present iff the run is feasible")

    def to_json(self) -> Dict[str, Any]:
        """The report as a JSON-ready dict. The value is keyed by the problem name,
        the certificate by `ordering` or `embedding` with string vertex keys."""
        data = asdict(self)
        data[self.problem] = data.pop("value")
        certificate = data.pop("certificate")
        data[CERTIFICATE_KEYS[self.problem]] = (
            None
            if certificate is None
            else {str(v): p for v, p in sorted(certificate.items())}
        )
        return data


def _oracle_value(problem: str, g: Graph) -> Optional[int]:
    if problem == "bandwidth":
        return bandwidth_bruteforce(g)[0]
    result = distortion_bruteforce(g)
    return None if result is None else result[0]


def _certificate_value(
    problem: str, g: Graph, certificate: Dict[int, int]
) -> Fraction:
    if problem == "bandwidth":
        return Fraction(bandwidth_of(g, certificate))
    return embedding_metrics(g, certificate)[2]


def _solve(
    problem: str,
    g: Graph,
    algo: str,
    bound: Optional[int],
    r_threshold: Optional[int],
    stats: SearchStats,
) -> Tuple[Optional[int], Optional[Dict[int, int]]]:
    if algo == "bruteforce":
        if problem == "bandwidth":
            value, certificate = bandwidth_bruteforce(g)
        else:
            result = distortion_bruteforce(g)
            if result is None:
                return None, None
            value, certificate = result
        if bound is not None and value > bound:
            return None, None
        return (value if bound is None else bound), certificate
    if problem == "bandwidth":
        if bound is None:
            return minimize_bandwidth(g, algo, stats)
        ordering = solve_bandwidth(g, bound, algo, stats)
        return (None, None) if ordering is None else (bound, ordering)
    if bound is None:
        if not is_connected(g):
            return None, None
        return minimize_distortion(g, algo, r_threshold, stats)
    embedding = solve_distortion(g, bound, algo, r_threshold, stats)
    return (None, None) if embedding is None else (bound, embedding)


def run_instance(
    g: Graph,
    problem: str,
    algo: str,
    name: str = "<graph>",
    bound: Optional[int] = None,
    r_threshold: Optional[int] = None,
    verify: bool = False,
) -> RunReport:
    """Runs one solver on `g` and reports on it.

    Args:
        g (Graph): the graph.
        problem (str): `bandwidth` or `distortion`.
        algo (str): `bruteforce` or one of the problem's algorithms.
        name (str, optional): the instance name for the report. Defaults to
            `<graph>`.
        bound (Optional[int], optional): decide this bound instead of minimising.
            Defaults to None.
        r_threshold (Optional[int], optional): passed on to the distortion solvers.
            Defaults to None.
        verify (bool, optional): also run the oracle and compare. Defaults to False.

    Raises:
        ValueError: if `problem` or `algo` is unknown, or the bound is invalid.

    Returns:
        RunReport: the report.
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem '{problem}', expected one of {PROBLEMS}")
    registry = BANDWIDTH_ALGORITHMS if problem == "bandwidth" else DISTORTION_ALGORITHMS
    if algo != "bruteforce" and algo not in registry:
        raise ValueError(
            f"unknown {problem} algorithm '{algo}',"
            f" expected one of {['bruteforce', *registry]}"
        )
    stats = SearchStats()
    start = time.perf_counter()
    value, certificate = _solve(problem, g, algo, bound, r_threshold, stats)
    seconds = time.perf_counter() - start

    verified: Optional[bool] = None
    if verify:
        optimum = _oracle_value(problem, g)
        if bound is None:
            verified = optimum == value
        else:
            verified = (optimum is not None and optimum <= bound) == (
                certificate is not None
            )
        if certificate is not None:
            limit = value if bound is None else bound
            assert limit is not None
            achieved = _certificate_value(problem, g, certificate)
            verified = verified and achieved <= limit
        if not verified:
            logger.error(
                "%s %s on %s disagrees with the oracle (%s vs %s)",
                problem,
                algo,
                name,
                value,
                optimum,
            )
    logger.info(
        "%s %s on %s (n=%d): %s in %.3fs", problem, algo, name, g.n, value, seconds
    )
    return RunReport(
        problem=problem,
        algorithm=algo,
        instance=name,
        n=g.n,
        feasible=certificate is not None,
        value=value,
        certificate=certificate,
        seconds=seconds,
        peak_states=stats.peak_states,
        expanded=stats.expanded,
        verified=verified,
    )


def corpus_files(corpus: Path) -> List[Tuple[Path, str]]:
    """The graph files of a corpus directory, sorted, with the format implied by
    their suffix."""
    if not corpus.is_dir():
        raise ValueError(f"corpus '{corpus}' is not a directory")
    return [
        (path, CORPUS_SUFFIXES[path.suffix])
        for path in sorted(corpus.iterdir())
        if path.is_file() and path.suffix in CORPUS_SUFFIXES
    ]


def _bench_one(job: Tuple[Path, str, str, str, Optional[int]]) -> RunReport:
    path, fmt, problem, algo, r_threshold = job
    g = read_graph(path, fmt)
    return run_instance(g, problem, algo, path.name, r_threshold=r_threshold)


def run_bench(
    corpus: Path,
    problem: str,
    algos: Sequence[str],
    jobs: int = 1,
    r_threshold: Optional[int] = None,
) -> List[RunReport]:
    """Minimises `problem` on every corpus file with every algorithm in `algos`.

    Args:
        corpus (Path): a directory of `*.txt` edge lists and `*.col` DIMACS files.
        problem (str): `bandwidth` or `distortion`.
        algos (Sequence[str]): the algorithms, run in this order per instance.
        jobs (int, optional): worker processes; 1 runs in-process. Defaults to 1.
        r_threshold (Optional[int], optional): for the distortion solvers. Defaults
            to None.

    Returns:
        List[RunReport]: one report per instance and algorithm, in corpus order.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be positive, got {jobs}")
    work = [
        (path, fmt, problem, algo, r_threshold)
        for path, fmt in corpus_files(corpus)
        for algo in algos
    ]
    logger.info("benchmarking %d runs with %d jobs", len(work), jobs)
    if jobs == 1 or len(work) <= 1:
        return [_bench_one(job) for job in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:  # pragma: no cover
        return list(pool.map(_bench_one, work))


def bench_frame(reports: Sequence[RunReport]) -> pd.DataFrame:
    """One row per report: instance, n, algorithm, value, time and state counts."""
    columns = ["instance", "n", "algorithm", "value", "seconds", "peak_states"]
    return pd.DataFrame(
        [[getattr(r, c) for c in columns] for r in reports], columns=columns
    )


def summary_table(reports: Sequence[RunReport]) -> str:
    frame = bench_frame(reports)
    return tabulate(frame, headers="keys", showindex=False, floatfmt=".4f")


__all__ = generate__all__(__name__)
