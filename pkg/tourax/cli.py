# © Copyright the tourax contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Command line interface.

Every subcommand builds a :class:`RunReport` and prints it either as ``key: value``
lines or, with ``--json``, as a single JSON object carrying ``"schema": 1``. Exit codes
are 0 on success, 1 for usage and input errors and 2 when a search stops at its
budget.

Example::

    tourax solve --input k6.txt --algo owal-exact --mode circuit
    tourax bound --input k6.txt --tour 1,6,5,2,3,4
    tourax search --mode classical --bag 2,11,7,5,3,6,9,4 --target 3
"""

import argparse
import json
import logging
import sys
import time
from collections.abc import Sequence
from typing import Any, Callable, NoReturn, Optional

import equinox as eqx
import numpy as np

from tourax import __version__
from tourax.bounds import (
    build_swa,
    first_array_certificate,
    first_array_lower_bound,
    gap_bound,
    row_charges,
)
from tourax.cutset import CutsetConstruction, decide_hamiltonian
from tourax.data import INSTANCE_KINDS, gen_random_instance
from tourax.experiments import (
    ALGORITHMS,
    BatchSpec,
    make_solver,
    run_compare,
    summarize,
    write_csv,
)
from tourax.io import parse_graph, parse_instance, parse_tree, write_instance
from tourax.search import (
    SearchOracle,
    classical_bag_search,
    qsearch_bitwise,
    qsearch_nonunitary,
    qsearch_one_step,
)
from tourax.solvers import SolveReport
from tourax.tour import Tour, tour_weight
from tourax.util import (
    DEFAULT_BUDGET,
    MODES,
    BudgetExhaustedError,
    TouraxError,
    TourInstanceMismatchError,
    format_order,
)

_logger = logging.getLogger(__name__)

JSON_SCHEMA = 1
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
SEARCH_MODES = ("classical", "q1", "q2", "q3")


class UsageError(TouraxError, ValueError):
    """Raise when the command line itself is malformed."""


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting on bad input."""

    def error(self, message: str) -> NoReturn:
        """Raise :class:`UsageError` with the usage line prepended."""
        raise UsageError(f"{self.format_usage().strip()}\n{message}")


class RunReport(eqx.Module):
    """
    Outcome of one subcommand.

    :param command: Subcommand name
    :param instance: Instance, graph or bag the command worked on
    :param algorithm: Algorithm or search mode used
    :param order: Tour, path or circuit found, if any
    :param weight: Weight of 'order'
    :param explored: Candidates, chord insertions or inner products spent
    :param wall_time: Seconds spent in the command
    :param seed: Seed of generated instances
    :param details: Further command-specific fields, printed in insertion order
    """

    command: str
    instance: Optional[str] = None
    algorithm: Optional[str] = None
    order: Optional[tuple[int, ...]] = None
    weight: Optional[float] = None
    explored: Optional[int] = None
    wall_time: float = 0.0
    seed: Optional[int] = None
    details: dict[str, Any] = eqx.field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        """Return the report as a JSON-ready dictionary."""
        return {
            "schema": JSON_SCHEMA,
            "command": self.command,
            "instance": self.instance,
            "algorithm": self.algorithm,
            "order": None if self.order is None else list(self.order),
            "weight": self.weight,
            "explored": self.explored,
            "wall_time": self.wall_time,
            "seed": self.seed,
            **self.details,
        }

    def to_text(self) -> str:
        """Render the report as ``key: value`` lines; list fields get a line each."""
        lines = []
        fields = {
            "instance": self.instance,
            "algorithm": self.algorithm,
            "order": None if self.order is None else format_order(self.order),
            "weight": self.weight,
            "explored": self.explored,
            "seed": self.seed,
        }
        for key, value in {**fields, **self.details}.items():
            if value is None:
                continue
            if isinstance(value, list):
                lines.append(f"{key}:")
                lines.extend(f"  {item}" for item in value)
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines)


def _integers(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(token) for token in text.split(",") if token.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(
            f"expected comma separated integers, got {text!r}"
        ) from err


def _number(value: float) -> float:
    return int(value) if float(value).is_integer() else float(value)


def cmd_solve(args: argparse.Namespace) -> RunReport:
    """Solve an instance file with one algorithm."""
    inst = parse_instance(args.input)
    tree = None if args.tree is None else parse_tree(args.tree)
    solver = make_solver(
        args.algo, args.mode, args.budget, args.start, args.policy, tree
    )
    start = time.perf_counter()
    solution, state = solver.solve(inst)
    elapsed = time.perf_counter() - start
    explored = None
    if isinstance(state, SolveReport):
        explored = state.candidates_checked
    elif isinstance(state, CutsetConstruction):
        explored = state.nodes_explored
    return RunReport(
        "solve",
        inst.name,
        args.algo,
        solution.order,
        _number(solution.weight),
        explored,
        elapsed,
        details={"mode": solution.mode},
    )


def cmd_bound(args: argparse.Namespace) -> RunReport:
    """Report the first-array lower bound and, given a tour, its gap bound."""
    inst = parse_instance(args.input)
    start = time.perf_counter()
    swa = build_swa(inst)
    details: dict[str, Any] = {"lower_bound": _number(first_array_lower_bound(swa))}
    order = weight = None
    if args.tour is not None:
        order = args.tour
        if len(order) != inst.p:
            raise TourInstanceMismatchError(
                f"tour visits {len(order)} vertices but the instance has {inst.p}"
            )
        weight = _number(tour_weight(inst, order))
        tour = Tour(order, weight)
        details["gap_bound"] = _number(gap_bound(swa, tour))
        details["incident_gap_bound"] = _number(gap_bound(swa, tour, "incident"))
        details["row_charges"] = [
            f"{charge.vertex}->{charge.neighbour}: {_number(charge.excess)}"
            for charge in row_charges(swa, tour)
        ]
    if args.certificate:
        certificate = first_array_certificate(inst, args.budget)
        details["certificate"] = (
            format_order(certificate.tour.order)
            if certificate.tour is not None
            else None
        )
        details["certified_optimal"] = certificate.exact
    return RunReport(
        "bound",
        inst.name,
        "first-array",
        order,
        weight,
        wall_time=time.perf_counter() - start,
        details=details,
    )


def cmd_hamiltonian(args: argparse.Namespace) -> RunReport:
    """Decide whether a graph file has a Hamiltonian circuit."""
    graph = parse_graph(args.input)
    tree = None if args.tree is None else parse_tree(args.tree)
    start = time.perf_counter()
    decision = decide_hamiltonian(graph, tree, args.budget)
    details: dict[str, Any] = {"answer": "YES" if decision.found else "NO"}
    if decision.found:
        details["chords"] = ",".join(decision.selection.chords)
        details["branches"] = ",".join(decision.selection.branches)
    return RunReport(
        "hamiltonian",
        str(args.input),
        "cutset",
        decision.order,
        explored=decision.nodes_explored,
        wall_time=time.perf_counter() - start,
        details=details,
    )


def _dense_summary(amps: np.ndarray, n: int) -> dict[str, Any]:
    found = int(np.argmax(np.abs(amps)))
    others = np.delete(np.abs(amps), found)
    return {
        "found": found,
        "bits": format(found, f"0{n}b"),
        "amplitude": float(amps[found]),
        "max_off_target": float(others.max()) if others.size else 0.0,
    }


def cmd_search(args: argparse.Namespace) -> RunReport:
    """Run one of the target searches and print its trace."""
    start = time.perf_counter()
    if args.mode == "classical":
        if args.bag is None:
            raise UsageError("'--bag' is required for the classical search")
        found, trace = classical_bag_search(args.bag, args.target)
        details = {
            "found": found,
            "splits": len(trace),
            "trace": [
                f"{k} {format_order(split.first_half)} {_number(split.inner_product)}"
                for k, split in enumerate(trace, start=1)
            ],
        }
        return RunReport(
            "search",
            format_order(args.bag),
            args.mode,
            explored=len(trace) + 1,
            wall_time=time.perf_counter() - start,
            details=details,
        )
    if args.n is None:
        raise UsageError(f"'--n' is required for the {args.mode} search")
    oracle = SearchOracle(args.n, args.target)
    if args.mode == "q1":
        found, steps = qsearch_bitwise(args.n, oracle)
        details = {
            "found": found,
            "bits": format(found, f"0{args.n}b"),
            "trace": [
                f"{k} {step.prefix} {step.inner_product:.12g}"
                for k, step in enumerate(steps, start=1)
            ],
        }
        explored = sum(step.tests for step in steps)
    else:
        search = qsearch_one_step if args.mode == "q2" else qsearch_nonunitary
        details = _dense_summary(np.asarray(search(args.n, oracle).amps), args.n)
        explored = 1
    return RunReport(
        "search",
        f"n={args.n}",
        args.mode,
        explored=explored,
        wall_time=time.perf_counter() - start,
        details=details,
    )


def cmd_gen(args: argparse.Namespace) -> RunReport:
    """Generate a random instance file."""
    start = time.perf_counter()
    inst = gen_random_instance(args.seed, args.p, args.kind, args.range)
    path = write_instance(inst, args.out)
    return RunReport(
        "gen",
        inst.name,
        wall_time=time.perf_counter() - start,
        seed=args.seed,
        details={"kind": args.kind, "p": inst.p, "out": str(path)},
    )


def cmd_compare(args: argparse.Namespace) -> RunReport:
    """Run a seeded comparison batch and write its CSV."""
    spec = BatchSpec(
        args.p_min,
        args.p_max,
        args.seeds,
        tuple(args.kind) if args.kind else ("uniform", "euclidean"),
        tuple(args.algo) if args.algo else ALGORITHMS,
        args.budget,
    )
    start = time.perf_counter()
    rows = run_compare(spec, progress=not (args.quiet or args.json))
    summary = summarize(rows)
    details: dict[str, Any] = {
        "rows": summary.rows,
        "violation_rate": summary.violation_rate,
        "incident_violation_rate": summary.incident_violation_rate,
        "exact_agreement": summary.exact_agreement,
        "candidates": [
            f"p={p}: min {low} median {_number(middle)} max {high}"
            for p, (low, middle, high) in summary.candidates.items()
        ],
    }
    if args.out is not None:
        details["out"] = str(write_csv(rows, args.out))
    return RunReport(
        "compare",
        f"p={spec.p_min}..{spec.p_max}",
        ",".join(spec.algos),
        wall_time=time.perf_counter() - start,
        details=details,
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with every subcommand."""
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON object")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true")
    verbosity.add_argument("--quiet", "-q", action="store_true")

    parser = _ArgumentParser(prog="tourax", description=__doc__.splitlines()[1])
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", parents=[common], help=cmd_solve.__doc__)
    solve.add_argument("--input", required=True)
    solve.add_argument("--algo", required=True, choices=ALGORITHMS)
    solve.add_argument("--mode", choices=MODES)
    solve.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    solve.add_argument("--start", type=int, default=1)
    solve.add_argument(
        "--policy", choices=("include_first", "exclude_first"), default="include_first"
    )
    solve.add_argument("--tree", help="spanning tree file for the cutset method")
    solve.set_defaults(handler=cmd_solve)

    bound = commands.add_parser("bound", parents=[common], help=cmd_bound.__doc__)
    bound.add_argument("--input", required=True)
    bound.add_argument("--tour", type=_integers)
    bound.add_argument("--certificate", action="store_true")
    bound.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bound.set_defaults(handler=cmd_bound)

    hamiltonian = commands.add_parser(
        "hamiltonian", parents=[common], help=cmd_hamiltonian.__doc__
    )
    hamiltonian.add_argument("--input", required=True)
    hamiltonian.add_argument("--tree")
    hamiltonian.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    hamiltonian.set_defaults(handler=cmd_hamiltonian)

    search = commands.add_parser("search", parents=[common], help=cmd_search.__doc__)
    search.add_argument("--mode", choices=SEARCH_MODES, default="classical")
    search.add_argument("--n", type=int)
    search.add_argument("--bag", type=_integers)
    search.add_argument("--target", type=int, required=True)
    search.set_defaults(handler=cmd_search)

    gen = commands.add_parser("gen", parents=[common], help=cmd_gen.__doc__)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--kind", choices=INSTANCE_KINDS, default="uniform")
    gen.add_argument("--range", type=float, default=100)
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=cmd_gen)

    compare = commands.add_parser(
        "compare", parents=[common], help=cmd_compare.__doc__
    )
    compare.add_argument("--p-min", type=int, default=4)
    compare.add_argument("--p-max", type=int, default=7)
    compare.add_argument("--seeds", type=int, default=5)
    compare.add_argument("--kind", action="append", choices=INSTANCE_KINDS)
    compare.add_argument("--algo", action="append", choices=ALGORITHMS)
    compare.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    compare.add_argument("--out")
    compare.set_defaults(handler=cmd_compare)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.ERROR
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _emit(report: RunReport, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.to_json()))
    else:
        print(report.to_text())


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line interface.

    :param argv: Arguments without the program name; :data:`sys.argv` when omitted
    :return: The exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_INPUT
    _configure_logging(args)
    handler: Callable[[argparse.Namespace], RunReport] = args.handler
    try:
        report = handler(args)
    except BudgetExhaustedError as err:
        print(f"BUDGET {err} ({err.explored} explored)", file=sys.stderr)
        return EXIT_BUDGET
    except (TouraxError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
