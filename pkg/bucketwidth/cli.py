# Copyright (c) 2023 Graphcore Ltd. All rights reserved.

"""The `bucketwidth` command line.

JSON goes to stdout, logging and summaries to stderr. Exit codes: 0 solved or
feasible, 1 infeasible, 2 bad input, 3 disagreement with the oracle under
`--verify`.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import (
    AbstractSet,
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from ._internal_utils import generate__all__
from .bandwidth import BANDWIDTH_ALGORITHMS
from .bench import PROBLEMS, RunReport, run_bench, run_instance, summary_table
from .bucket import (
    ValueRange,
    count_triples_bruteforce,
    enumerate_bucket_extensions,
    pbf_key,
)
from .distortion import DISTORTION_ALGORITHMS
from .graph import (
    GRAPH_FORMATS,
    Graph,
    RootedSpanningTree,
    read_graph,
    rooted_spanning_tree,
)
from .oracle import pbf_bruteforce
from .prototypes import (
    count_path_prototypes,
    count_prototypes,
    enumerate_partial_bucket_functions,
    enumerate_prototypes,
    path_tree,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3


def _emit(obj: Any) -> None:
    print(json.dumps(obj, sort_keys=True))


def _emit_lines(objs: Iterable[Any]) -> None:
    for obj in objs:
        _emit(obj)


def _as_json_map(f: Dict[int, int]) -> Dict[str, int]:
    return {str(v): x for v, x in sorted(f.items())}


def parse_assignment(text: str) -> Dict[int, int]:
    """Parses `"1=2,3=-1"` into `{1: 2, 3: -1}`; the empty string gives `{}`.

    Raises:
        ValueError: on a malformed item.
    """
    f: Dict[int, int] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        vertex, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"expected 'vertex=value', got '{item}'")
        f[int(vertex)] = int(value)
    return f


def _load(args: argparse.Namespace) -> Graph:
    if args.graph is None:
        raise ValueError(f"{args.command} {getattr(args, 'what', '')} needs --graph")
    return read_graph(args.graph, args.format)


def _summarise(reports: Sequence[RunReport]) -> None:
    print(summary_table(reports), file=sys.stderr)


def _report(report: RunReport) -> int:
    _emit(report.to_json())
    _summarise([report])
    if report.verified is False:
        return EXIT_MISMATCH
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_bandwidth(args: argparse.Namespace) -> int:
    g = _load(args)
    return _report(
        run_instance(
            g,
            "bandwidth",
            args.algo,
            name=Path(args.graph).name,
            bound=args.bound,
            verify=args.verify,
        )
    )


def cmd_distortion(args: argparse.Namespace) -> int:
    g = _load(args)
    return _report(
        run_instance(
            g,
            "distortion",
            args.algo,
            name=Path(args.graph).name,
            bound=args.bound,
            r_threshold=args.r_threshold,
            verify=args.verify,
        )
    )


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.what == "prototypes":
        tree, anchors = _prototype_tree(args)
        value_range = None if args.N is None else ValueRange(1, args.N)
        _emit_lines(
            {"domain": sorted(p.domain), "values": _as_json_map(p.values)}
            for p in enumerate_prototypes(
                tree, anchors, args.root_value, args.in_A, value_range
            )
        )
        return EXIT_OK
    g = _load(args)
    if args.what == "extensions":
        value_range = None if args.N is None else ValueRange(1, args.N)
        f = parse_assignment(args.pbf)
        _emit_lines(
            {"extension": _as_json_map(extension)}
            for extension in enumerate_bucket_extensions(g, f, value_range)
        )
        return EXIT_OK
    seen: Set[FrozenSet[Tuple[int, int]]] = set()
    for pbf, _ in enumerate_partial_bucket_functions(g, args.N, args.domain_size):
        key = pbf_key(pbf)
        if key not in seen:
            seen.add(key)
            _emit({"pbf": _as_json_map(pbf)})
    return EXIT_OK


def _prototype_tree(
    args: argparse.Namespace,
) -> Tuple[RootedSpanningTree, AbstractSet[int]]:
    if args.path is not None:
        tree = path_tree(args.path)
        anchors = {1, args.path + 1} if args.both_ends else {1}
        return tree, anchors
    if args.graph is None:
        raise ValueError("prototypes need --path or --graph")
    tree = rooted_spanning_tree(_load(args))
    return tree, tree.branching_vertices() | {tree.root}


def cmd_count(args: argparse.Namespace) -> int:
    if args.what == "prototypes":
        if args.path is not None and args.N is None and args.root_value == 0:
            kind = ("S" if args.both_ends else "T") + ("" if args.in_A else "'")
            count = count_path_prototypes(
                kind, args.path, far_end_outside=args.far_end_outside
            )
        else:
            tree, anchors = _prototype_tree(args)
            value_range = None if args.N is None else ValueRange(1, args.N)
            excluded = (tree.n,) if args.far_end_outside and args.path else ()
            count = count_prototypes(
                tree, anchors, args.root_value, args.in_A, value_range, excluded
            )
    else:
        if args.N is None:
            raise ValueError(f"count {args.what} needs --N")
        g = _load(args)
        if args.what == "triples":
            count = count_triples_bruteforce(g, args.N)
        elif args.bruteforce:
            count = len(pbf_bruteforce(g, args.N))
        else:
            pbfs = enumerate_partial_bucket_functions(g, args.N)
            count = len({pbf_key(pbf) for pbf, _ in pbfs})
    _emit({"count": count})
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if args.problem == "bandwidth":
        algos = list(BANDWIDTH_ALGORITHMS)
    else:
        algos = list(DISTORTION_ALGORITHMS)
    if args.algo != "both":
        algos = [args.algo]
    reports = run_bench(
        Path(args.corpus), args.problem, algos, args.jobs, args.r_threshold
    )
    _emit([report.to_json() for report in reports])
    _summarise(reports)
    return EXIT_OK


def _add_graph_options(parser: argparse.ArgumentParser, positional: bool) -> None:
    if positional:
        parser.add_argument("graph", help="graph file")
    else:
        parser.add_argument("--graph", default=None, help="graph file")
    parser.add_argument(
        "--format",
        choices=GRAPH_FORMATS,
        default="edgelist",
        help="graph file format (default: edgelist)",
    )


def _add_solver_parser(
    subparsers: Any, problem: str, algos: Sequence[str], handler: Callable[..., int]
) -> argparse.ArgumentParser:
    p = subparsers.add_parser(problem, help=f"decide or minimise {problem}")
    _add_graph_options(p, positional=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--bound", type=int, help=f"decide {problem} <= BOUND")
    mode.add_argument("--minimize", action="store_true", help=f"minimise {problem}")
    p.add_argument(
        "--algo",
        choices=["bruteforce", *algos],
        default="expspace",
        help="algorithm (default: expspace)",
    )
    p.add_argument(
        "--verify", action="store_true", help="cross-check with the brute-force oracle"
    )
    p.set_defaults(handler=handler)
    return p


def _add_prototype_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--path", type=int, default=None, help="path with PATH edges")
    parser.add_argument(
        "--both-ends", action="store_true", help="anchor both ends of the path"
    )
    parser.add_argument("--in-A", action="store_true", help="put the root in A")
    parser.add_argument("--root-value", type=int, default=0, help="(default: 0)")
    parser.add_argument(
        "--far-end-outside",
        action="store_true",
        help="only prototypes whose domain misses the far end of the path",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bucketwidth",
        description="Exact bandwidth and line distortion of small graphs.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    _add_solver_parser(
        subparsers, "bandwidth", list(BANDWIDTH_ALGORITHMS), cmd_bandwidth
    )
    p_dist = _add_solver_parser(
        subparsers, "distortion", list(DISTORTION_ALGORITHMS), cmd_distortion
    )
    p_dist.add_argument(
        "--r-threshold",
        type=int,
        default=None,
        help="split instances with more segments than this (default: never)",
    )

    p_enum = subparsers.add_parser("enumerate", help="stream objects as JSON lines")
    p_enum.add_argument("what", choices=["extensions", "pbf", "prototypes"])
    _add_graph_options(p_enum, positional=False)
    p_enum.add_argument("--N", type=int, default=None, help="values in 1..N")
    p_enum.add_argument(
        "--pbf", default="", help="partial bucket function, e.g. '1=2,3=1'"
    )
    p_enum.add_argument(
        "--domain-size", type=int, default=None, help="only pbfs with |A| = k"
    )
    _add_prototype_options(p_enum)
    p_enum.set_defaults(handler=cmd_enumerate)

    p_count = subparsers.add_parser("count", help="print a count as JSON")
    p_count.add_argument("what", choices=["prototypes", "triples", "pbf"])
    _add_graph_options(p_count, positional=False)
    p_count.add_argument("--N", type=int, default=None, help="values in 1..N")
    p_count.add_argument(
        "--bruteforce", action="store_true", help="count pbfs by exhaustion"
    )
    _add_prototype_options(p_count)
    p_count.set_defaults(handler=cmd_count)

    p_bench = subparsers.add_parser("bench", help="minimise over a corpus directory")
    p_bench.add_argument("corpus", help="directory of *.txt / *.col graph files")
    p_bench.add_argument("--problem", choices=PROBLEMS, default="bandwidth")
    p_bench.add_argument(
        "--algo", choices=["expspace", "polyspace", "both"], default="both"
    )
    p_bench.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_bench.add_argument("--r-threshold", type=int, default=None)
    p_bench.set_defaults(handler=cmd_bench)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbosity, 2)]
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Runs the command line and returns its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        code: int = args.handler(args)
    except (OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    return code


__all__ = generate__all__(__name__)
