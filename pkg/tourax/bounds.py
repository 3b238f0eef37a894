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
Row-sorted weight arrays and the bounds read off them.

Each vertex's incident edges are sorted by weight and grouped into arrays of equal
weight. Every vertex of a circuit leaves along some edge, which weighs at least the
vertex's first array weight, so summing the first array weights gives a lower bound on
every circuit.

Given a tour, charging each vertex the edge to its successor and subtracting the
vertex's minimum gives per-row excesses; their sum bounds how far that tour can lie
above the optimum. Charging each vertex the cheaper of its two tour edges instead
gives a smaller figure that may miss expensive edges.
"""

import itertools
import logging
import math
from typing import Literal, NamedTuple, Optional, get_args

import equinox as eqx
import numpy as np
from typing_extensions import TypeAlias

from tourax.cutset import SimpleGraph, decide_hamiltonian
from tourax.data import Instance
from tourax.tour import Tour, check_solution, tour_weight
from tourax.util import DEFAULT_BUDGET, ZERO_TOLERANCE

_logger = logging.getLogger(__name__)

Charging: TypeAlias = Literal["successor", "incident"]
CHARGINGS: tuple[str, ...] = get_args(Charging)


class SortedWeightArrays(eqx.Module):
    """
    Every row's incident edges, sorted and grouped by distinct weight.

    :param instance: The instance the arrays were built from
    :param arrays: For each row, the neighbour labels of each array, cheapest first
    :param levels: For each row, the common weight of each array
    """

    instance: Instance
    arrays: tuple[tuple[tuple[int, ...], ...], ...]
    levels: tuple[tuple[float, ...], ...]

    @property
    def p(self) -> int:
        """Number of rows."""
        return len(self.arrays)

    def first_array(self, vertex: int) -> tuple[int, ...]:
        """Return the cheapest neighbours of 1-based 'vertex'."""
        return self.arrays[vertex - 1][0]

    def row_minimum(self, vertex: int) -> float:
        """Return the smallest weight incident to 1-based 'vertex'."""
        return self.levels[vertex - 1][0]


class RowCharge(NamedTuple):
    """Tour edge charged to a row and its excess over the row minimum."""

    vertex: int
    neighbour: int
    excess: float


class FirstArrayCertificate(eqx.Module):
    """
    Circuit drawn from first-array edges, if there is one.

    :param tour: Circuit using first-array edges only, or :data:`None`
    :param lower_bound: The first-array lower bound
    :param nodes_explored: Chord insertions spent deciding Hamiltonicity
    """

    tour: Optional[Tour]
    lower_bound: float
    nodes_explored: int

    @property
    def exact(self) -> bool:
        """Whether the circuit meets the lower bound, which proves it optimal."""
        if self.tour is None:
            return False
        return abs(self.tour.weight - self.lower_bound) <= ZERO_TOLERANCE * max(
            1.0, self.lower_bound
        )


def build_swa(inst: Instance) -> SortedWeightArrays:
    """
    Sort every row of the weight matrix and group it by distinct weight.

    Equal weights keep increasing neighbour order.

    :param inst: Instance to sort
    :return: The sorted weight arrays
    """
    weights = np.asarray(inst.weights)
    arrays, levels = [], []
    for i in range(inst.p):
        neighbours = [j for j in range(inst.p) if j != i]
        ranked = sorted(neighbours, key=lambda j, row=i: (weights[row, j], j))
        grouped = itertools.groupby(ranked, key=lambda j, row=i: weights[row, j])
        groups = [(float(w), tuple(j + 1 for j in members)) for w, members in grouped]
        levels.append(tuple(weight for weight, _ in groups))
        arrays.append(tuple(members for _, members in groups))
    return SortedWeightArrays(inst, tuple(arrays), tuple(levels))


def first_array_lower_bound(swa: SortedWeightArrays) -> float:
    """Sum every row's smallest weight, a lower bound on every circuit."""
    return math.fsum(levels[0] for levels in swa.levels)


def check_charging(charging: str) -> Charging:
    """
    Validate a row charging rule.

    :param charging: ``successor`` or ``incident``
    :return: The validated rule
    """
    if charging not in CHARGINGS:
        raise ValueError(f"'charging' must be one of {CHARGINGS}, got {charging!r}")
    return charging  # pyright: ignore[reportReturnType]


def row_charges(
    swa: SortedWeightArrays, tour: Tour, charging: Charging = "successor"
) -> tuple[RowCharge, ...]:
    """
    Charge every vertex of a tour one of its two tour edges.

    ``successor`` charges each vertex the edge to its successor, so every tour edge is
    charged once. ``incident`` charges each vertex the cheaper of its two tour edges,
    preferring the successor on ties; expensive edges may then go uncharged.

    :param swa: Sorted weight arrays of the tour's instance
    :param tour: Circuit to grade
    :param charging: Which tour edge each vertex is charged
    :return: One charge per vertex, in tour order
    """
    charging = check_charging(charging)
    check_solution(swa.instance, tour)
    weights = np.asarray(swa.instance.weights)
    order = tour.order
    charges = []
    for u, v, w in zip(order[-1:] + order[:-1], order, order[1:] + order[:1]):
        neighbour = w
        if charging == "incident" and weights[v - 1, u - 1] < weights[v - 1, w - 1]:
            neighbour = u
        excess = float(weights[v - 1, neighbour - 1]) - swa.row_minimum(v)
        charges.append(RowCharge(v, neighbour, excess))
    return tuple(charges)


def gap_bound(
    swa: SortedWeightArrays, tour: Tour, charging: Charging = "successor"
) -> float:
    """
    Bound how far a tour can lie above the optimum.

    Under ``successor`` charging every tour edge is charged to exactly one row, so the
    bound equals the tour weight minus :func:`first_array_lower_bound`. The
    ``incident`` bound is never larger and carries no such guarantee.

    :param swa: Sorted weight arrays of the tour's instance
    :param tour: Circuit to grade
    :param charging: Row charging rule of :func:`row_charges`
    :return: Sum of the per-row excesses of :func:`row_charges`
    """
    return math.fsum(charge.excess for charge in row_charges(swa, tour, charging))


def gap_bound_violated(
    swa: SortedWeightArrays,
    tour: Tour,
    optimum: float,
    charging: Charging = "successor",
) -> bool:
    """
    Check a tour's gap against its gap bound, logging a warning on violation.

    :param swa: Sorted weight arrays of the tour's instance
    :param tour: Circuit to grade
    :param optimum: Weight of an optimal circuit
    :param charging: Row charging rule of :func:`row_charges`
    :return: :data:`True` if the tour lies further above 'optimum' than its bound
    """
    bound = gap_bound(swa, tour, charging)
    violated = tour.weight - optimum > bound + ZERO_TOLERANCE * max(1.0, optimum)
    if violated:
        _logger.warning(
            "%s gap bound %s violated on %s: tour %s, optimum %s",
            charging.capitalize(),
            bound,
            swa.instance.name,
            tour.weight,
            optimum,
        )
    return violated


def first_array_subgraph(swa: SortedWeightArrays) -> SimpleGraph:
    """Return the graph of every row's first-array edges, weighted."""
    edges = sorted(
        {
            (min(v, w), max(v, w))
            for v in range(1, swa.p + 1)
            for w in swa.first_array(v)
        }
    )
    weights = np.asarray(swa.instance.weights)
    return SimpleGraph(swa.p, edges, [weights[i - 1, j - 1] for i, j in edges])


def first_array_certificate(
    inst: Instance, budget: int = DEFAULT_BUDGET
) -> FirstArrayCertificate:
    """
    Look for a circuit among the first-array edges.

    A circuit made of first-array edges only is not always optimal, since a row can
    use a first-array edge of its neighbour that is not one of its own. It is proven
    optimal when its weight equals the lower bound, which
    :attr:`FirstArrayCertificate.exact` reports.

    :param inst: Instance to examine
    :param budget: Maximum chord insertions spent deciding Hamiltonicity
    :return: The circuit, if any, and the lower bound
    """
    swa = build_swa(inst)
    bound = first_array_lower_bound(swa)
    subgraph = first_array_subgraph(swa)
    if not subgraph.is_connected():
        return FirstArrayCertificate(None, bound, 0)
    decision = decide_hamiltonian(subgraph, budget=budget)
    if not decision.found:
        return FirstArrayCertificate(None, bound, decision.nodes_explored)
    tour = Tour(decision.order, tour_weight(inst, decision.order))
    return FirstArrayCertificate(tour, bound, decision.nodes_explored)
