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

r"""
Exact solvers over the ordered weighted adjacency list, and a permutation oracle.

Every Hamiltonian path uses :math:`p - 1` edges and every circuit :math:`p`. Listing
all edge sublists of that size in nondecreasing total weight and stopping at the first
one that passes :func:`~tourax.tour.validate_sublist` therefore finds an optimal
solution. :class:`SublistEnumerator` produces the sublists lazily, best first, from a
priority queue, so the :math:`\binom{m}{k}` candidates are never materialised.

:func:`brute_force` scores every canonical permutation instead and serves as the
independent reference for the enumerator.
"""

import heapq
import itertools
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from typing import Optional, Union

import equinox as eqx
import jax.numpy as jnp
import numpy as np

from tourax.data import Instance, relabel
from tourax.solvers.base import BudgetedSolver, ModalSolver
from tourax.tour import (
    OWAL,
    EdgeSubList,
    HamPath,
    Solution,
    Tour,
    build_owal,
    make_solution,
    sublist_to_order,
    tour_weight,
    validate_sublist,
)
from tourax.util import (
    BRUTE_FORCE_LIMIT,
    DEFAULT_BUDGET,
    RELABELING_LIMIT,
    ZERO_TOLERANCE,
    BudgetExhaustedError,
    Mode,
    TooLargeError,
    batched,
    canonical_circuits,
    canonical_paths,
    check_budget,
    check_mode,
    count_canonical,
)

_logger = logging.getLogger(__name__)

#: Permutations scored at once by the vectorised scans.
SCAN_BATCH_SIZE = 4096

_Node = tuple[float, tuple[int, ...], int]


class SolveReport(eqx.Module):
    """
    Result of an exact solver.

    :param solution: Optimal tour or path, or :data:`None` if the budget ran out first
    :param weight: Weight of 'solution', infinite when there is none
    :param candidates_checked: Sublists or permutations examined
    :param exhausted_budget: Whether the search stopped at its budget
    """

    solution: Optional[Solution]
    weight: float
    candidates_checked: int
    exhausted_budget: bool = False


class SublistEnumerator(Iterator[EdgeSubList]):
    r"""
    Lazily list the size-'k' sublists of an OWAL in nondecreasing total weight.

    A sublist is the index set :math:`i_0 < i_1 < \dots < i_{k-1}` into the OWAL,
    starting from the 'k' cheapest edges :math:`(0, \dots, k - 1)`. Each index set
    carries an active position :math:`a`, the lowest position moved so far, or
    :math:`k` for the start. It has up to two children:

    * advance :math:`i_a` by one, when :math:`a < k` and it stays below
      :math:`i_{a+1}` (or :math:`m`);
    * advance :math:`i_{a-1}` by one, when :math:`a \ge 1` and it stays below
      :math:`i_a` (or :math:`m`), making :math:`a - 1` active.

    Every index set has exactly one parent, and children never weigh less than their
    parent, so popping the frontier by ``(weight, indices)`` emits each set once, in
    nondecreasing weight with ties in lexicographic index order.

    :param owal: Sorted edge list
    :param k: Sublist size
    :param budget: Maximum number of sublists emitted; unlimited if :data:`None`
    """

    def __init__(self, owal: OWAL, k: int, budget: Optional[int] = None):
        """Initialise the frontier with the 'k' cheapest edges."""
        m = len(owal)
        if not 0 < k <= m:
            raise ValueError(f"'k' must lie in 1..{m}, got {k}")
        self.owal = owal
        self.k = k
        self.budget = None if budget is None else check_budget(budget)
        self.emitted = 0
        self._weights = np.asarray(owal.weights).tolist()
        self._edges = [tuple(edge) for edge in np.asarray(owal.edges).tolist()]
        start = tuple(range(k))
        self._frontier: list[_Node] = [(self._weight(start), start, k)]

    def _weight(self, indices: Sequence[int]) -> float:
        return math.fsum(self._weights[i] for i in indices)

    def _push(self, indices: list[int], active: int) -> None:
        node = tuple(indices)
        heapq.heappush(self._frontier, (self._weight(node), node, active))

    def __iter__(self) -> "SublistEnumerator":
        """Return the enumerator itself."""
        return self

    def __next__(self) -> EdgeSubList:
        """Emit the next cheapest sublist."""
        if not self._frontier:
            raise StopIteration
        if self.budget is not None and self.emitted >= self.budget:
            raise BudgetExhaustedError(
                f"enumeration stopped after {self.emitted} sublists", self.emitted
            )
        weight, indices, active = heapq.heappop(self._frontier)
        m = len(self._weights)
        bounds = (*indices, m)
        if active < self.k and indices[active] + 1 < bounds[active + 1]:
            child = list(indices)
            child[active] += 1
            self._push(child, active)
        if active >= 1 and indices[active - 1] + 1 < bounds[active]:
            child = list(indices)
            child[active - 1] += 1
            self._push(child, active - 1)
        self.emitted += 1
        return EdgeSubList([self._edges[i] for i in indices], weight, indices)


def enumerate_sublists_by_weight(
    owal: OWAL, k: int, budget: Optional[int] = None
) -> SublistEnumerator:
    """
    Lazily list the size-'k' sublists of 'owal' in nondecreasing total weight.

    :param owal: Sorted edge list
    :param k: Sublist size, at most the number of edges
    :param budget: Maximum number of sublists emitted; unlimited if :data:`None`
    :return: An iterator of :class:`~tourax.tour.EdgeSubList`
    """
    return SublistEnumerator(owal, k, budget)


def owal_exact(
    inst: Instance, mode: Mode = "circuit", budget: int = DEFAULT_BUDGET
) -> SolveReport:
    """
    Return the first feasible sublist in nondecreasing weight order.

    No feasible sublist weighs less than the first one found, so it is optimal; among
    equally light optima the one with the lexicographically smallest OWAL indices
    wins.

    :param inst: Instance to solve
    :param mode: ``path`` checks sublists of :math:`p - 1` edges, ``circuit`` of
        :math:`p`
    :param budget: Maximum number of sublists checked
    :return: The optimal solution and the number of candidates checked
    """
    check_mode(mode)
    budget = check_budget(budget)
    k = inst.p if mode == "circuit" else inst.p - 1
    enumerator = enumerate_sublists_by_weight(build_owal(inst), k)
    last = None
    for last in itertools.islice(enumerator, budget):
        if not validate_sublist(inst, last, mode):
            continue
        solution = make_solution(inst, sublist_to_order(last, mode), mode)
        _logger.info(
            "%s %s: optimum %s after %d candidates",
            inst.name,
            mode,
            solution.weight,
            enumerator.emitted,
        )
        return SolveReport(solution, solution.weight, enumerator.emitted)
    report = SolveReport(None, math.inf, enumerator.emitted, exhausted_budget=True)
    heaviest = "-" if last is None else last.weight
    raise BudgetExhaustedError(
        f"no feasible {mode} among {enumerator.emitted} sublists of weight up to "
        f"{heaviest}",
        enumerator.emitted,
        report,
    )


def _order_weights(inst: Instance, orders: np.ndarray, mode: Mode) -> np.ndarray:
    """Weigh a batch of 1-based vertex orders."""
    indices = jnp.asarray(orders - 1)
    following = jnp.roll(indices, -1, axis=1) if mode == "circuit" else indices[:, 1:]
    leading = indices if mode == "circuit" else indices[:, :-1]
    return np.asarray(jnp.sum(inst.weights[leading, following], axis=1))


def brute_force(inst: Instance, mode: Mode = "circuit") -> SolveReport:
    """
    Score every canonical circuit or path and keep the lightest.

    Orders are scanned in lexicographic order, and the first of equally light orders
    is kept.

    :param inst: Instance to solve, at most twelve vertices
    :param mode: Whether to search circuits or paths
    :return: The optimal solution and the number of orders scored
    """
    check_mode(mode)
    if inst.p > BRUTE_FORCE_LIMIT:
        raise TooLargeError(
            f"'p' must be at most {BRUTE_FORCE_LIMIT} for brute force, got {inst.p}"
        )
    scan = canonical_circuits if mode == "circuit" else canonical_paths
    orders = scan(inst.p)
    best_order, best_weight = None, math.inf
    for block in batched(orders, SCAN_BATCH_SIZE):
        sums = _order_weights(inst, block, mode)
        lightest = sums.min()
        if lightest < best_weight - ZERO_TOLERANCE * max(1.0, abs(lightest)):
            position = int(np.argmax(sums <= lightest + ZERO_TOLERANCE))
            best_order, best_weight = block[position], float(sums[position])
    solution = make_solution(inst, best_order.tolist(), mode)
    return SolveReport(solution, solution.weight, count_canonical(inst.p, mode))


def max_triangular_relabeling(inst: Instance) -> tuple[Instance, float]:
    """
    Find a relabelling with the largest triangular sum, by scanning all of them.

    Relabellings are scanned in lexicographic order and the first maximiser is kept.

    :param inst: Instance to relabel, at most nine vertices
    :return: The maximising relabelled instance and its triangular sum
    """
    if inst.p > RELABELING_LIMIT:
        raise TooLargeError(
            f"'p' must be at most {RELABELING_LIMIT} for a full relabelling scan"
        )
    mask = jnp.triu(jnp.ones((inst.p, inst.p)), k=2)
    best_permutation, best_sum = None, -math.inf
    permutations = itertools.permutations(range(1, inst.p + 1))
    for block in batched(permutations, SCAN_BATCH_SIZE):
        indices = jnp.asarray(block - 1)
        relabelled = inst.weights[indices[:, :, None], indices[:, None, :]]
        sums = np.asarray(jnp.sum(relabelled * mask, axis=(1, 2)))
        largest = sums.max()
        if largest > best_sum + ZERO_TOLERANCE * max(1.0, abs(largest)):
            position = int(np.argmax(sums >= largest - ZERO_TOLERANCE))
            best_permutation, best_sum = block[position], float(sums[position])
    return relabel(inst, best_permutation.tolist()), best_sum


def diagonal_duality_rate(instances: Iterable[Instance]) -> float:
    """
    Measure how often the diagonal path of a maximal relabelling is shortest.

    :param instances: Instances of at most nine vertices
    :return: Fraction of instances where the diagonal path of
        :func:`max_triangular_relabeling` weighs as much as the shortest path
    """
    agreements = []
    for inst in instances:
        relabelled, _ = max_triangular_relabeling(inst)
        diagonal = tour_weight(relabelled, range(1, inst.p + 1), "path")
        shortest = brute_force(inst, "path").weight
        tolerance = ZERO_TOLERANCE * max(1.0, shortest)
        agreements.append(abs(diagonal - shortest) <= tolerance)
        if not agreements[-1]:
            _logger.info(
                "%s: diagonal path %s but shortest %s", inst.name, diagonal, shortest
            )
    if not agreements:
        raise ValueError("'instances' must not be empty")
    return sum(agreements) / len(agreements)


class OWALExact(ModalSolver[SolveReport], BudgetedSolver):
    """
    Solver running :func:`owal_exact`.

    :param mode: ``circuit`` or ``path``
    :param budget: Maximum number of sublists checked
    """

    def solve(
        self, instance: Instance, solver_state: None = None
    ) -> tuple[Union[Tour, HamPath], SolveReport]:
        """Solve exactly, returning the full report as state."""
        del solver_state
        report = owal_exact(instance, self.mode, self.budget)
        return report.solution, report


class BruteForce(ModalSolver[SolveReport]):
    """
    Solver running :func:`brute_force`.

    :param mode: ``circuit`` or ``path``
    """

    def solve(
        self, instance: Instance, solver_state: None = None
    ) -> tuple[Union[Tour, HamPath], SolveReport]:
        """Solve by exhaustive scan, returning the full report as state."""
        del solver_state
        report = brute_force(instance, self.mode)
        return report.solution, report
