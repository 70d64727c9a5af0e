"""
Command-line front end.

    dualcube gen    --n 3 --format json
    dualcube trees  --n 4 --terminals 0000000,0000001,0000010,1111111
    dualcube cut    --n 4 --r 2
    dualcube verify --n 4 --suite trees --budget 200 --jobs 4

Exit codes: 0 success, 1 verification failure, 2 usage error. Output on
stdout (or --output) depends only on the run configuration; logs go to stderr.
"""
import argparse
import logging
import os
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from dotenv import load_dotenv

from .compcut import component_cut, cut_size_formula, structure_check, threshold, verify_cut
from .errors import (
    BudgetExceededError,
    DualCubeError,
    InvalidOrderError,
    PreconditionError,
    UnsupportedOrderError,
)
from .oracle import exhaustive_cut_search, vertex_connectivity, verify_tree_set
from .shared import (
    build_cut_set_payload,
    build_graph_payload,
    build_report_payload,
    build_tree_set_payload,
    dumps,
    render_cut_set_dot,
    render_graph_dot,
    render_tree_set_dot,
)
from .streeforge import TerminalSet, sample_terminal_sets, strees3, strees4
from .topology import DualCube, build_dual_cube, cluster_of, cross_edge

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SUITES = ("topology", "trees", "cuts", "all")
FORMATS = ("json", "dot", "text")
DEFAULT_BUDGET = 200
CONNECTIVITY_ORDER_LIMIT = 4
CROSS_EDGE_ORDER_LIMIT = 4


class UsageError(Exception):
    """Bad flag values or environment defaults."""


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output."""

    command: str
    n: int
    r: Optional[int] = None
    terminals: Tuple[str, ...] = ()
    seed: int = 0
    format: str = "json"
    output: Optional[str] = None
    jobs: int = 1
    budget: int = DEFAULT_BUDGET
    suite: str = "all"
    unchecked: bool = False
    verbose: int = 0

    def __post_init__(self):
        if self.terminals and len(set(self.terminals)) != len(self.terminals):
            raise UsageError("terminals must be distinct")
        if self.jobs < 1:
            raise UsageError(f"--jobs must be positive, got {self.jobs}")
        if self.budget < 0:
            raise UsageError(f"--budget must not be negative, got {self.budget}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, environ: Optional[Mapping[str, str]] = None) -> "RunConfig":
        """
        Layer parsed flags over environment defaults.

        Args:
            args: Parsed command line
            environ: Environment mapping, ``os.environ`` when omitted

        Raises:
            UsageError: If an environment default is not an integer or a value is invalid
        """
        environ = os.environ if environ is None else environ
        jobs = args.jobs if args.jobs is not None else _env_int(environ, "DUALCUBE_JOBS", 1)
        seed = args.seed if args.seed is not None else _env_int(environ, "DUALCUBE_SEED", 0)
        raw_terminals = getattr(args, "terminals", None)
        terminals = tuple(t.strip() for t in raw_terminals.split(",")) if raw_terminals else ()
        return cls(
            command=args.command,
            n=args.n,
            r=getattr(args, "r", None),
            terminals=terminals,
            seed=seed,
            format=args.format,
            output=args.output,
            jobs=jobs,
            budget=getattr(args, "budget", DEFAULT_BUDGET),
            suite=getattr(args, "suite", "all"),
            unchecked=getattr(args, "unchecked", False),
            verbose=args.verbose,
        )


def _env_int(environ: Mapping[str, str], name: str, default: int) -> int:
    raw = environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualcube",
        description="Dual cube generalized and component connectivity toolkit",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="order of the dual cube")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", default=None, help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="default: $DUALCUBE_SEED or 0")
    common.add_argument("--jobs", type=int, default=None, help="default: $DUALCUBE_JOBS or 1")
    common.add_argument("-v", "--verbose", action="count", default=0)

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("gen", parents=[common], help="emit D_n")

    trees = commands.add_parser("trees", parents=[common], help="build and verify n-1 trees")
    trees.add_argument("--terminals", required=True,
                       help="3 or 4 comma-separated bit strings")
    trees.add_argument("--unchecked", action="store_true", help="skip verification")

    cut = commands.add_parser("cut", parents=[common], help="build and verify a minimum component cut")
    cut.add_argument("--r", type=int, required=True)
    cut.add_argument("--unchecked", action="store_true", help="skip verification")

    verify = commands.add_parser("verify", parents=[common], help="run oracle suites")
    verify.add_argument("--suite", choices=SUITES, default="all")
    verify.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="sampled trials per randomized check")
    return parser


# Rendering


def _emit(config: RunConfig, text: str) -> None:
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)


# Commands


def cmd_gen(config: RunConfig) -> int:
    cube = build_dual_cube(config.n)
    if config.format == "dot":
        _emit(config, render_graph_dot(cube, name=f"D{cube.n}"))
    elif config.format == "json":
        _emit(config, dumps(build_graph_payload(cube)))
    else:
        lines = [f"D_{cube.n}: {cube.vertex_count} vertices, {len(cube.edges())} edges"]
        lines.extend(f"{u} {v}" for u, v in cube.edges())
        _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_trees(config: RunConfig) -> int:
    cube = build_dual_cube(config.n)
    ts = TerminalSet.of(cube, config.terminals)
    tree_set = strees3(cube, ts) if len(ts) == 3 else strees4(cube, ts)
    report = None
    if not config.unchecked:
        report = verify_tree_set(cube, tree_set, expected_count=cube.n - 1)
        if not report.overall:
            logger.error("tree set failed verification for %s", ",".join(config.terminals))
            sys.stderr.write(dumps(build_report_payload(report)))
            return EXIT_FAILED

    if config.format == "dot":
        _emit(config, render_tree_set_dot(tree_set))
    elif config.format == "json":
        payload = build_tree_set_payload(tree_set)
        if report is not None:
            payload["verification"] = build_report_payload(report)
        _emit(config, dumps(payload))
    else:
        lines = [f"case: {tree_set.case}", f"trees: {len(tree_set)}"]
        for index, tree in enumerate(tree_set.trees, start=1):
            lines.append(f"T{index}: " + " ".join(f"{u}-{v}" for u, v in sorted(tree)))
        if report is not None:
            lines.append("verified")
        _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_cut(config: RunConfig) -> int:
    cube = build_dual_cube(config.n)
    cut = component_cut(cube, config.r)
    census = None
    if not config.unchecked:
        census = verify_cut(cube, cut)
        if not census.report.overall:
            sys.stderr.write(dumps(build_report_payload(census.report)))
            return EXIT_FAILED

    if config.format == "dot":
        _emit(config, render_cut_set_dot(cube, cut))
    elif config.format == "json":
        payload = build_cut_set_payload(cut)
        if census is not None:
            payload["verification"] = build_report_payload(census.report)
        _emit(config, dumps(payload))
    else:
        lines = [
            f"removed ({len(cut)}): " + " ".join(str(v) for v in sorted(cut.removed)),
            "census: " + " ".join(str(size) for size in cut.census),
        ]
        _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


# Verification suites


def _tree_trial(task: Tuple[int, int, Tuple[str, ...]]) -> Dict[str, Any]:
    """One sampled tree construction; top level so worker processes can import it."""
    index, n, terminals = task
    cube = DualCube(n)
    try:
        tree_set = strees3(cube, terminals) if len(terminals) == 3 else strees4(cube, terminals)
    except DualCubeError as error:
        return {"index": index, "terminals": list(terminals), "case": None,
                "passed": False, "error": f"{type(error).__name__}: {error}"}
    report = verify_tree_set(cube, tree_set, expected_count=n - 1)
    failure = report.failures()[0] if not report.overall else None
    return {
        "index": index,
        "terminals": list(terminals),
        "case": tree_set.case,
        "passed": report.overall,
        "error": None if failure is None else f"{failure.name} [{failure.scope}]",
    }


def _run_trials(trial: Callable, tasks: Sequence, jobs: int) -> List[Dict[str, Any]]:
    if jobs == 1 or len(tasks) <= 1:
        return [trial(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(trial, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def topology_suite(cube: DualCube) -> Dict[str, Any]:
    g = cube.to_networkx()
    checks = {
        "vertex-count": g.number_of_nodes() == 2 ** (2 * cube.n - 1),
        "regular": all(d == cube.n for _, d in g.degree),
        "bipartite": nx.is_bipartite(g),
    }
    if cube.n <= CROSS_EDGE_ORDER_LIMIT:
        found = Counter()
        for u, v in g.edges:
            if u.bit(cube.width) != v.bit(cube.width):
                zero, one = (u, v) if u.bit(cube.width) == 0 else (v, u)
                found[(cluster_of(zero), cluster_of(one))] += 1
        checks["one-cross-edge"] = all(
            found[(c0, c1)] == 1 and cube.has_edge(*cross_edge(c0, c1))
            for c0 in cube.clusters(0)
            for c1 in cube.clusters(1)
        )
    if cube.n <= CONNECTIVITY_ORDER_LIMIT:
        checks["connectivity"] = vertex_connectivity(cube) == cube.n
    return {"checks": checks, "passed": all(checks.values())}


def trees_suite(cube: DualCube, config: RunConfig) -> Dict[str, Any]:
    if cube.n < 4:
        raise UnsupportedOrderError(f"the trees suite needs n >= 4, got {cube.n}")
    three = config.budget // 3
    samples = (
        sample_terminal_sets(cube, config.budget - three, size=4, seed=config.seed)
        + sample_terminal_sets(cube, three, size=3, seed=config.seed)
    )
    tasks = [
        (index, cube.n, tuple(str(v) for v in ts))
        for index, ts in enumerate(samples)
    ]
    results = _run_trials(_tree_trial, tasks, config.jobs)
    census = Counter(result["case"] for result in results if result["case"])
    failures = [result for result in results if not result["passed"]]
    return {
        "trials": len(results),
        "passed": not failures,
        "failures": failures,
        "census": dict(sorted(census.items())),
    }


def _structure_trials(cube: DualCube, config: RunConfig) -> Dict[str, Any]:
    rng = random.Random(config.seed)
    vertices = cube.vertices()
    outcome = {}
    for k in range(1, cube.n):
        size = threshold(cube.n, k)
        failed = []
        for trial in range(config.budget):
            removed = rng.sample(vertices, size)
            report = structure_check(cube, removed, k)
            if not report.holds:
                failed.append({"trial": trial, "removed": sorted(str(v) for v in removed),
                               "census": list(report.census)})
        outcome[str(k)] = {"trials": config.budget, "failures": failed[:5], "passed": not failed}
    return outcome


def cuts_suite(cube: DualCube, config: RunConfig) -> Dict[str, Any]:
    upper = {}
    for r in range(1, cube.n):
        cut = component_cut(cube, r)
        census = verify_cut(cube, cut)
        upper[str(r)] = {
            "size": len(cut),
            "formula": cut_size_formula(cube.n, r),
            "census": list(census.census),
            "passed": census.report.overall and len(cut) == cut_size_formula(cube.n, r),
        }

    lower = {}
    for r in range(1, cube.n):
        size = cut_size_formula(cube.n, r) - 1
        try:
            witness = exhaustive_cut_search(cube, size, r)
        except BudgetExceededError as error:
            logger.info("lower bound for r=%d skipped: %s", r, error)
            lower[str(r)] = {"size": size, "skipped": True, "passed": True}
            continue
        lower[str(r)] = {
            "size": size,
            "skipped": False,
            "witness": None if witness is None else sorted(str(v) for v in witness),
            "passed": witness is None,
        }

    structure = _structure_trials(cube, config) if cube.n >= 3 else {}
    passed = (
        all(entry["passed"] for entry in upper.values())
        and all(entry["passed"] for entry in lower.values())
        and all(entry["passed"] for entry in structure.values())
    )
    return {"upper": upper, "lower": lower, "structure": structure, "passed": passed}


def cmd_verify(config: RunConfig) -> int:
    cube = build_dual_cube(config.n)
    chosen = ("topology", "trees", "cuts") if config.suite == "all" else (config.suite,)
    summary: Dict[str, Any] = {"n": cube.n, "seed": config.seed, "suites": {}}
    for suite in chosen:
        logger.info("running %s suite on D_%d", suite, cube.n)
        if suite == "topology":
            summary["suites"][suite] = topology_suite(cube)
        elif suite == "trees":
            if config.suite == "all" and cube.n < 4:
                continue
            summary["suites"][suite] = trees_suite(cube, config)
        else:
            summary["suites"][suite] = cuts_suite(cube, config)
    summary["passed"] = all(result["passed"] for result in summary["suites"].values())

    if config.format == "text":
        lines = []
        for suite, result in summary["suites"].items():
            lines.append(f"{suite}: {'ok' if result['passed'] else 'FAILED'}")
            for case, count in result.get("census", {}).items():
                lines.append(f"  {case}: {count}")
        lines.append("overall: " + ("ok" if summary["passed"] else "FAILED"))
        _emit(config, "\n".join(lines) + "\n")
    else:
        _emit(config, dumps(summary))
    return EXIT_OK if summary["passed"] else EXIT_FAILED


COMMANDS = {
    "gen": cmd_gen,
    "trees": cmd_trees,
    "cut": cmd_cut,
    "verify": cmd_verify,
}


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Iterable[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name, ``sys.argv[1:]`` when omitted

    Returns:
        Process exit code
    """
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exit_:
        return EXIT_OK if exit_.code == 0 else EXIT_USAGE

    try:
        config = RunConfig.from_args(args)
    except UsageError as error:
        sys.stderr.write(f"dualcube: error: {error}\n")
        return EXIT_USAGE
    _configure_logging(config.verbose)

    try:
        return COMMANDS[config.command](config)
    except (InvalidOrderError, PreconditionError, UnsupportedOrderError) as error:
        sys.stderr.write(f"dualcube: error: {error}\n")
        return EXIT_USAGE
    except DualCubeError as error:
        logger.error("%s: %s", type(error).__name__, error)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
