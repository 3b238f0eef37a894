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
Seeded batch comparisons of every solver against the permutation oracle.

:func:`make_solver` is the single registry mapping algorithm names to configured
solvers; the command line and :func:`run_compare` both use it. A batch walks a grid of
instance kinds, vertex counts and seeds, solves each instance with every algorithm and
records one :class:`CompareRow` per solution, together with the oracle optimum, the
first-array lower bound and the gap bounds of every circuit under both row charging
rules.
"""

import csv
import logging
import math
from collections.abc import Callable, Iterable, Sequence
from pathlib import Path
from typing import Any, NamedTuple, Optional, Union

import equinox as eqx
import numpy as np
from tqdm import tqdm

from tourax.bounds import (
    SortedWeightArrays,
    build_swa,
    first_array_lower_bound,
    gap_bound,
    gap_bound_violated,
)
from tourax.cutset import CutsetSolver, SpanningTree
from tourax.data import INSTANCE_KINDS, Instance, gen_random_instance
from tourax.solvers import (
    AngularSweep,
    BruteForce,
    Contraction,
    ModifiedNearestNeighbor,
    NearestNeighbor,
    OWALExact,
    Solver,
    SolveReport,
    TranspositionV1,
    TranspositionV2,
)
from tourax.tour import Solution, Tour
from tourax.util import (
    BRUTE_FORCE_LIMIT,
    DEFAULT_BUDGET,
    MIN_VERTICES,
    BudgetExhaustedError,
    GreedyStuckError,
    Mode,
    check_budget,
    check_mode,
)

_logger = logging.getLogger(__name__)

#: Modes each algorithm can produce.
ALGORITHM_MODES: dict[str, tuple[str, ...]] = {
    "nn": ("circuit",),
    "mnn": ("circuit",),
    "contract": ("circuit",),
    "sweep": ("circuit",),
    "cutset": ("circuit",),
    "tpv1": ("path",),
    "tpv2": ("path",),
    "owal-exact": ("circuit", "path"),
    "brute": ("circuit", "path"),
}
ALGORITHMS = tuple(ALGORITHM_MODES)
#: Algorithms that need planar coordinates.
GEOMETRIC_ALGORITHMS = frozenset({"sweep"})

CSV_COLUMNS = (
    "p",
    "seed",
    "kind",
    "algo",
    "mode",
    "weight",
    "optimum",
    "gap_to_optimum",
    "lower_bound",
    "gap_bound",
    "gap_bound_violated",
    "incident_gap_bound",
    "incident_gap_bound_violated",
    "candidates_checked",
)


def make_solver(
    algo: str,
    mode: Optional[Mode] = None,
    budget: int = DEFAULT_BUDGET,
    start: int = 1,
    policy: str = "include_first",
    tree: Optional[SpanningTree] = None,
) -> Solver:
    """
    Configure the solver registered under 'algo'.

    :param algo: One of :data:`ALGORITHMS`
    :param mode: Circuit or path; the algorithm's first mode when omitted
    :param budget: Limit for the budgeted searches
    :param start: First vertex of the nearest neighbour methods
    :param policy: Criterion order of the modified nearest neighbour method
    :param tree: Spanning tree of the cutset construction
    :return: The configured solver
    """
    if algo not in ALGORITHM_MODES:
        raise ValueError(f"'algo' must be one of {ALGORITHMS}, got {algo!r}")
    mode = ALGORITHM_MODES[algo][0] if mode is None else check_mode(mode)
    if mode not in ALGORITHM_MODES[algo]:
        raise ValueError(f"algorithm {algo!r} does not build a {mode}")
    factories = {
        "nn": lambda: NearestNeighbor(start),
        "mnn": lambda: ModifiedNearestNeighbor(policy, start),
        "contract": Contraction,
        "sweep": AngularSweep,
        "cutset": lambda: CutsetSolver(budget=budget, tree=tree),
        "tpv1": TranspositionV1,
        "tpv2": TranspositionV2,
        "owal-exact": lambda: OWALExact(mode=mode, budget=budget),
        "brute": lambda: BruteForce(mode=mode),
    }
    return factories[algo]()


class BatchSpec(eqx.Module):
    """
    Grid of a comparison batch.

    :param p_min: Smallest vertex count
    :param p_max: Largest vertex count, at most the brute force limit
    :param seeds: Number of seeds per cell, ``0..seeds - 1``
    :param kinds: Instance families
    :param algos: Algorithms to compare
    :param budget: Limit for the budgeted searches
    """

    p_min: int = eqx.field(default=4, converter=int)
    p_max: int = eqx.field(default=7, converter=int)
    seeds: int = eqx.field(default=5, converter=int)
    kinds: tuple[str, ...] = eqx.field(
        default=("uniform", "euclidean"), converter=tuple
    )
    algos: tuple[str, ...] = eqx.field(default=ALGORITHMS, converter=tuple)
    budget: int = eqx.field(default=DEFAULT_BUDGET, converter=int)

    def __check_init__(self):
        """Check that the grid is well formed."""
        if not MIN_VERTICES <= self.p_min <= self.p_max <= BRUTE_FORCE_LIMIT:
            raise ValueError(
                f"'p_min' and 'p_max' must satisfy {MIN_VERTICES} <= p_min <= p_max "
                f"<= {BRUTE_FORCE_LIMIT}"
            )
        if self.seeds < 1:
            raise ValueError("'seeds' must be a positive integer")
        unknown_kinds = set(self.kinds) - set(INSTANCE_KINDS)
        if unknown_kinds:
            raise ValueError(f"'kinds' must be drawn from {INSTANCE_KINDS}")
        unknown_algos = set(self.algos) - set(ALGORITHMS)
        if unknown_algos:
            raise ValueError(f"'algos' must be drawn from {ALGORITHMS}")
        check_budget(self.budget)


class CompareRow(NamedTuple):
    """One solution of a comparison batch; bound fields are :data:`None` for paths."""

    p: int
    seed: int
    kind: str
    algo: str
    mode: str
    weight: float
    optimum: float
    gap_to_optimum: float
    lower_bound: Optional[float]
    gap_bound: Optional[float]
    gap_bound_violated: Optional[bool]
    incident_gap_bound: Optional[float]
    incident_gap_bound_violated: Optional[bool]
    candidates_checked: Optional[int]


class CompareSummary(NamedTuple):
    """
    Aggregates of a comparison batch.

    ``candidates`` maps each vertex count to the minimum, median and maximum number of
    sublists the OWAL search checked before its first success.
    """

    rows: int
    violation_rate: float
    incident_violation_rate: float
    candidates: dict[int, tuple[int, float, int]]
    exact_agreement: bool


def _graded(
    grade: Callable[..., Any],
    swa: SortedWeightArrays,
    solution: Solution,
    *args,
    **kwargs,
) -> Any:
    """Apply a circuit grade, or return :data:`None` for paths."""
    if not isinstance(solution, Tour):
        return None
    return grade(swa, solution, *args, **kwargs)


def _instance_rows(
    inst: Instance, seed: int, kind: str, spec: BatchSpec
) -> list[CompareRow]:
    optimum = {
        mode: BruteForce(mode=mode).solve(inst)[0].weight
        for mode in ("circuit", "path")
    }
    swa = build_swa(inst)
    bound = first_array_lower_bound(swa)
    rows = []
    for algo in spec.algos:
        if algo in GEOMETRIC_ALGORITHMS and not inst.is_euclidean:
            continue
        for mode in ALGORITHM_MODES[algo]:
            solver = make_solver(algo, mode, spec.budget)
            try:
                solution, state = solver.solve(inst)
            except (BudgetExhaustedError, GreedyStuckError) as err:
                _logger.warning("%s on %s %s: %s", algo, inst.name, mode, err)
                continue
            candidates = None
            if isinstance(state, SolveReport):
                candidates = state.candidates_checked
            circuit = isinstance(solution, Tour)
            rows.append(
                CompareRow(
                    p=inst.p,
                    seed=seed,
                    kind=kind,
                    algo=algo,
                    mode=mode,
                    weight=solution.weight,
                    optimum=optimum[mode],
                    gap_to_optimum=solution.weight - optimum[mode],
                    lower_bound=bound if circuit else None,
                    gap_bound=_graded(gap_bound, swa, solution),
                    gap_bound_violated=_graded(
                        gap_bound_violated, swa, solution, optimum[mode]
                    ),
                    incident_gap_bound=_graded(
                        gap_bound, swa, solution, charging="incident"
                    ),
                    incident_gap_bound_violated=_graded(
                        gap_bound_violated,
                        swa,
                        solution,
                        optimum[mode],
                        charging="incident",
                    ),
                    candidates_checked=candidates,
                )
            )
    return rows


def run_compare(spec: BatchSpec, progress: bool = True) -> list[CompareRow]:
    """
    Solve every instance of a batch with every algorithm.

    :param spec: The batch grid
    :param progress: Whether to show a progress bar
    :return: One row per solution, in grid order
    """
    cells = [
        (kind, p, seed)
        for kind in spec.kinds
        for p in range(spec.p_min, spec.p_max + 1)
        for seed in range(spec.seeds)
    ]
    rows = []
    for kind, p, seed in tqdm(cells, disable=not progress):
        inst = gen_random_instance(seed, p, kind)
        rows.extend(_instance_rows(inst, seed, kind, spec))
    return rows


def _rate(flags: Iterable[Optional[bool]]) -> float:
    graded = [flag for flag in flags if flag is not None]
    return sum(graded) / len(graded) if graded else 0.0


def summarize(rows: Sequence[CompareRow]) -> CompareSummary:
    """
    Aggregate a batch into its gap-bound violation rate and candidate distribution.

    :param rows: Rows of :func:`run_compare`
    :return: The summary
    """
    violation_rate = _rate(row.gap_bound_violated for row in rows)
    incident_rate = _rate(row.incident_gap_bound_violated for row in rows)
    by_p: dict[int, list[int]] = {}
    for row in rows:
        if row.algo == "owal-exact" and row.candidates_checked is not None:
            by_p.setdefault(row.p, []).append(row.candidates_checked)
    candidates = {
        p: (min(counts), float(np.median(counts)), max(counts))
        for p, counts in sorted(by_p.items())
    }
    exact_agreement = all(
        math.isclose(row.weight, row.optimum)
        for row in rows
        if row.algo in ("owal-exact", "brute")
    )
    return CompareSummary(
        len(rows), violation_rate, incident_rate, candidates, exact_agreement
    )


def _csv_value(value: Union[float, bool, None]) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def write_csv(rows: Sequence[CompareRow], path: Union[str, Path]) -> Path:
    """
    Write comparison rows with a header of :data:`CSV_COLUMNS`.

    :param rows: Rows of :func:`run_compare`
    :param path: Destination file
    :return: The destination path
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        writer.writerows([_csv_value(value) for value in row] for row in rows)
    return path
