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
Tour construction heuristics.

Three families are implemented:

#.  Greedy growth: :func:`nearest_neighbor` extends a path from its free end along the
    cheapest edge; :func:`modified_nn` additionally weighs, for each candidate edge, the
    total weight of the edges that choosing it rules out; :func:`contraction_tour`
    repeatedly joins two path fragments by the globally cheapest edge between their
    free ends.
#.  Relabelling: :func:`transposition_approx_v1` and :func:`transposition_approx_v2`
    permute vertex labels so that cheap edges land on the superdiagonal of the weight
    matrix, then read off the path :math:`1 \to 2 \to \dots \to p`.
#.  Geometry: :func:`angular_sweep` visits planar points in order of their polar angle
    about the centre of mass, and :func:`turning_sum` measures how much a tour turns.
"""

import logging
import math
import warnings
from collections.abc import Sequence
from typing import Literal, Optional

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from jaxtyping import Array, Float
from networkx.utils import UnionFind

from tourax.data import Instance, relabel
from tourax.solvers.base import CircuitSolver, Solver
from tourax.tour import (
    MAX_DEGREE,
    HamPath,
    Tour,
    build_owal,
    make_solution,
    sublist_to_order,
    tour_weight,
)
from tourax.util import (
    MIN_VERTICES,
    RELABELING_LIMIT,
    ZERO_TOLERANCE,
    DegenerateCenterWarning,
    Mode,
    NoCoordinatesError,
    TooLargeError,
    ZeroLengthSegmentError,
    batched,
    canonical_circuits,
    canonical_path,
    check_mode,
    check_vertex,
    to_indices,
)

_logger = logging.getLogger(__name__)

Policy = Literal["include_first", "exclude_first"]
POLICIES: tuple[str, ...] = ("include_first", "exclude_first")

#: Orders scored at once by the exhaustive turning scan.
TURNING_BATCH_SIZE = 4096


class ExclusionMatrices(eqx.Module):
    r"""
    Inclusion and exclusion weights of every directed edge.

    Choosing the edge :math:`j \to k` rules out every other edge into :math:`k` and
    every other edge out of :math:`j`, so its exclusion weight is

    .. math::

        w^e_{jk} = \sum_{l \ne j} w_{lk} + \sum_{m \ne k} w_{jm}.

    :param wia: Inclusion weights, the instance weights
    :param wea: Exclusion weights, zero on the diagonal
    """

    wia: Float[Array, "p p"]
    wea: Float[Array, "p p"]


class SweepFrame(eqx.Module):
    """
    Centre of mass of a planar instance and the polar angles about it.

    :param center: Mean of the points
    :param radius: Largest distance from 'center' to a point
    :param angles: Angle of each point about 'center', in :math:`[0, 2\\pi)`; zero for
        points at the centre
    :param distances: Distance of each point from 'center'
    """

    center: Float[Array, " 2"]
    radius: float
    angles: Float[Array, " p"]
    distances: Float[Array, " p"]


class Relabeling(eqx.Module):
    """
    Outcome of a transposition heuristic.

    :param instance: The relabelled instance
    :param labels: New vertex ``k`` is original vertex ``labels[k - 1]``
    :param transpositions: Label swaps applied, in order, identities omitted
    :param path: The diagonal path :math:`1 \\to \\dots \\to p` on 'instance'
    """

    instance: Instance
    labels: tuple[int, ...]
    transpositions: tuple[tuple[int, int], ...]
    path: HamPath

    @property
    def original_path(self) -> HamPath:
        """Return the diagonal path in the labels of the original instance."""
        return HamPath(canonical_path(self.labels), self.path.weight)


def nearest_neighbor(inst: Instance, start: int = 1) -> Tour:
    """
    Grow a path from 'start' along the cheapest edge to an unvisited vertex.

    Ties go to the smaller vertex label; the last vertex is joined back to 'start'.

    :param inst: Instance to solve
    :param start: First vertex, 1-based
    :return: The canonical circuit
    """
    weights = np.asarray(inst.weights)
    current = check_vertex(start, inst.p)
    order = [current]
    unvisited = set(range(inst.p)) - {current}
    while unvisited:
        current = min(unvisited, key=lambda j, row=current: (weights[row, j], j))
        order.append(current)
        unvisited.remove(current)
    return make_solution(inst, [v + 1 for v in order], "circuit")


def build_wea(inst: Instance) -> ExclusionMatrices:
    """
    Compute the exclusion weight of every edge.

    The symmetric instance is read as a digraph with two opposite edges of equal
    weight per vertex pair.

    :param inst: Instance to examine
    :return: Inclusion and exclusion weight matrices
    """
    wia = inst.weights
    wea = wia.sum(axis=1)[:, None] + wia.sum(axis=0)[None, :] - 2 * wia
    return ExclusionMatrices(wia, wea.at[jnp.diag_indices(inst.p)].set(0.0))


def _best(candidates: list[int], score: np.ndarray, maximise: bool) -> list[int]:
    """Keep the candidates attaining the best score."""
    values = score[candidates]
    target = values.max() if maximise else values.min()
    return [c for c, value in zip(candidates, values) if value == target]


def modified_nn(
    inst: Instance, policy: Policy = "include_first", start: int = 1
) -> Tour:
    """
    Grow a path by inclusion weight and exclusion weight together.

    From the free end, candidate edges lead to unvisited vertices, so a subcircuit is
    never closed early. ``include_first`` keeps the cheapest candidates and breaks ties
    by the largest exclusion weight; ``exclude_first`` keeps the largest exclusion
    weights and breaks ties by the cheapest edge. Remaining ties go to the smaller
    label.

    :param inst: Instance to solve
    :param policy: Order in which the two criteria are applied
    :param start: First vertex, 1-based
    :return: The canonical circuit
    """
    if policy not in POLICIES:
        raise ValueError(f"'policy' must be one of {POLICIES}, got {policy!r}")
    matrices = build_wea(inst)
    wia, wea = np.asarray(matrices.wia), np.asarray(matrices.wea)
    current = check_vertex(start, inst.p)
    order = [current]
    unvisited = set(range(inst.p)) - {current}
    while unvisited:
        candidates = sorted(unvisited)
        if policy == "include_first":
            candidates = _best(candidates, wia[current], maximise=False)
            candidates = _best(candidates, wea[current], maximise=True)
        else:
            candidates = _best(candidates, wea[current], maximise=True)
            candidates = _best(candidates, wia[current], maximise=False)
        current = candidates[0]
        order.append(current)
        unvisited.remove(current)
    return make_solution(inst, [v + 1 for v in order], "circuit")


def contraction_tour(inst: Instance) -> Tour:
    """
    Join path fragments by the globally cheapest edge between their free ends.

    Every vertex starts as a fragment of its own. Edges are taken in
    :func:`~tourax.tour.build_owal` order and accepted when both ends have degree below
    two and lie in different fragments. After :math:`p - 1` acceptances a single
    Hamiltonian path remains, whose ends are then joined.

    :param inst: Instance to solve
    :return: The canonical circuit
    """
    fragments = UnionFind(range(1, inst.p + 1))
    degree = dict.fromkeys(range(1, inst.p + 1), 0)
    chosen = []
    for i, j in np.asarray(build_owal(inst).edges).tolist():
        if degree[i] >= MAX_DEGREE or degree[j] >= MAX_DEGREE:
            continue
        if fragments[i] == fragments[j]:
            continue
        fragments.union(i, j)
        degree[i] += 1
        degree[j] += 1
        chosen.append((i, j))
        _logger.debug("Contracted edge (%d, %d)", i, j)
        if len(chosen) == inst.p - 1:
            break
    return make_solution(inst, sublist_to_order(chosen, "path"), "circuit")


def _path_weight(weights: np.ndarray, labels: Sequence[int]) -> float:
    indices = np.asarray(labels) - 1
    return math.fsum(weights[indices[:-1], indices[1:]])


def _swap(labels: list[int], a: int, b: int) -> None:
    """Swap the labels at 1-based positions 'a' and 'b' in place."""
    labels[a - 1], labels[b - 1] = labels[b - 1], labels[a - 1]


def _finish(
    inst: Instance, labels: list[int], transpositions: list[tuple[int, int]]
) -> Relabeling:
    relabelled = relabel(inst, labels)
    diagonal = tuple(range(1, inst.p + 1))
    path = HamPath(diagonal, tour_weight(relabelled, diagonal, "path"))
    return Relabeling(relabelled, tuple(labels), tuple(transpositions), path)


def transposition_relabeling_v1(inst: Instance) -> Relabeling:
    """
    Bring each row's cheapest forward edge onto the superdiagonal.

    For rows :math:`i = 1, \\dots, p - 2` in turn, if :math:`w_{i, i+1}` is not the
    smallest of :math:`w_{ij}, j > i`, the transposition :math:`(i + 1, j_i)` moves the
    smallest (ties to the smaller :math:`j`) onto the superdiagonal.

    :param inst: Instance to relabel
    :return: The relabelling and its diagonal path
    """
    weights = np.asarray(inst.weights)
    labels = list(range(1, inst.p + 1))
    transpositions = []
    for i in range(1, inst.p - 1):
        row = weights[labels[i - 1] - 1]
        forward = [row[labels[j - 1] - 1] for j in range(i + 1, inst.p + 1)]
        target = i + 1 + int(np.argmin(forward))
        if forward[0] == forward[target - i - 1]:
            continue
        _swap(labels, i + 1, target)
        transpositions.append((i + 1, target))
        _logger.debug("Transposition (%d, %d)", i + 1, target)
    return _finish(inst, labels, transpositions)


def transposition_approx_v1(inst: Instance) -> tuple[Instance, HamPath]:
    """
    Relabel with :func:`transposition_relabeling_v1`.

    :param inst: Instance to relabel
    :return: The relabelled instance and its diagonal path
    """
    result = transposition_relabeling_v1(inst)
    return result.instance, result.path


def _free_argmin(
    weights: np.ndarray,
    labels: list[int],
    row: int,
    free: range,
    exclude: Optional[int] = None,
) -> int:
    """Return the free position whose vertex is cheapest to reach from 'row'."""
    source = labels[row - 1] - 1
    options = [k for k in free if k != exclude]
    return min(options, key=lambda k: (weights[source, labels[k - 1] - 1], k))


def transposition_relabeling_v2(inst: Instance) -> Relabeling:
    """
    Relabel from both ends of the diagonal inwards, then polish.

    #.  The heaviest edge :math:`(i, j)` (ties lexicographic) is moved to position
        :math:`(1, p)` by the transpositions :math:`(1, i)` and :math:`(j, p)`, so it is
        the one edge the diagonal path leaves out.
    #.  With ends :math:`L = 1` and :math:`R = p`, the cheapest free neighbour of
        :math:`L` is swapped into position :math:`L + 1` and that of :math:`R` into
        :math:`R - 1`; when both want the same vertex the cheaper side takes it (ties
        to :math:`L`) and the other side takes its next best. The ends then move one
        step inwards, until :math:`L + 1` reaches :math:`R - 1`.
    #.  Passes over the transpositions :math:`(i, i + 2)` keep each that strictly
        shortens the diagonal path, until a pass keeps none.

    :param inst: Instance to relabel, at least four vertices
    :return: The relabelling and its diagonal path
    """
    if inst.p < MIN_VERTICES + 1:
        raise ValueError("'p' must be at least 4")
    weights = np.asarray(inst.weights)
    p = inst.p
    labels = list(range(1, p + 1))
    transpositions = []

    def apply(a: int, b: int) -> None:
        if a != b:
            _swap(labels, a, b)
            transpositions.append((a, b))
            _logger.debug("Transposition (%d, %d)", a, b)

    upper = np.triu(weights, k=1)
    i, j = (int(v) + 1 for v in np.unravel_index(np.argmax(upper), upper.shape))
    apply(1, i)
    apply(j, p)

    left, right = 1, p
    while left + 1 < right - 1:
        free = range(left + 1, right)
        target_left = _free_argmin(weights, labels, left, free)
        target_right = _free_argmin(weights, labels, right, free)
        if target_left == target_right:
            vertex = labels[target_left - 1] - 1
            left_cost = weights[labels[left - 1] - 1, vertex]
            right_cost = weights[labels[right - 1] - 1, vertex]
            if left_cost <= right_cost:
                target_right = _free_argmin(weights, labels, right, free, target_left)
            else:
                target_left = _free_argmin(weights, labels, left, free, target_right)
        apply(left + 1, target_left)
        if target_right == left + 1:
            target_right = target_left
        apply(right - 1, target_right)
        left, right = left + 1, right - 1

    improved = True
    while improved:
        improved = False
        for position in range(1, p - 1):
            current = _path_weight(weights, labels)
            _swap(labels, position, position + 2)
            if _path_weight(weights, labels) < current - ZERO_TOLERANCE:
                transpositions.append((position, position + 2))
                _logger.debug("Transposition (%d, %d)", position, position + 2)
                improved = True
            else:
                _swap(labels, position, position + 2)
    return _finish(inst, labels, transpositions)


def transposition_approx_v2(inst: Instance) -> tuple[Instance, HamPath]:
    """
    Relabel with :func:`transposition_relabeling_v2`.

    :param inst: Instance to relabel, at least four vertices
    :return: The relabelled instance and its diagonal path
    """
    result = transposition_relabeling_v2(inst)
    return result.instance, result.path


def _points(inst: Instance) -> Float[Array, "p 2"]:
    if inst.coords is None:
        raise NoCoordinatesError(f"instance {inst.name!r} has no coordinates")
    return inst.coords


def sweep_frame(inst: Instance) -> SweepFrame:
    """
    Compute the centre of mass of a planar instance and the polar angles about it.

    :param inst: Instance with coordinates
    :return: The sweep frame
    """
    points = _points(inst)
    center = points.mean(axis=0)
    offsets = points - center
    distances = jnp.linalg.norm(offsets, axis=1)
    angles = jnp.mod(jnp.arctan2(offsets[:, 1], offsets[:, 0]), 2 * jnp.pi)
    angles = jnp.where(distances <= ZERO_TOLERANCE, 0.0, angles)
    return SweepFrame(center, float(distances.max()), angles, distances)


def angular_sweep(inst: Instance, clockwise: bool = False) -> Tour:
    """
    Visit the points in order of their polar angle about the centre of mass.

    Equal angles go to the point nearer the centre, then to the smaller label. Points
    lying on the centre take angle zero and raise
    :class:`~tourax.util.DegenerateCenterWarning`.

    :param inst: Instance with coordinates
    :param clockwise: Sweep clockwise instead of anticlockwise
    :return: The canonical circuit
    """
    frame = sweep_frame(inst)
    distances = np.asarray(frame.distances)
    angles = np.asarray(frame.angles)
    at_center = distances <= ZERO_TOLERANCE
    if at_center.any():
        warnings.warn(
            f"{int(at_center.sum())} point(s) coincide with the centre of mass",
            DegenerateCenterWarning,
            stacklevel=2,
        )
    if clockwise:
        angles = np.where(angles > 0, 2 * np.pi - angles, 0.0)
    order = sorted(range(inst.p), key=lambda k: (angles[k], distances[k], k))
    return make_solution(inst, [k + 1 for k in order], "circuit")


def _turning_sums(
    points: Float[Array, "p 2"], orders: np.ndarray, mode: Mode
) -> Float[Array, " b"]:
    """Total absolute turning of each row of 'orders', 0-based vertex indices."""
    walk = points[jnp.asarray(orders)]
    segments = jnp.roll(walk, -1, axis=1) - walk
    if mode == "path":
        segments = segments[:, :-1]
    if bool(jnp.any(jnp.linalg.norm(segments, axis=-1) <= ZERO_TOLERANCE)):
        raise ZeroLengthSegmentError("consecutive tour points coincide")
    incoming = jnp.roll(segments, 1, axis=1) if mode == "circuit" else segments[:, :-1]
    outgoing = segments if mode == "circuit" else segments[:, 1:]
    cross = incoming[..., 0] * outgoing[..., 1] - incoming[..., 1] * outgoing[..., 0]
    dot = jnp.sum(incoming * outgoing, axis=-1)
    return jnp.sum(jnp.arctan2(jnp.abs(cross), dot), axis=-1)


def turning_sum(inst: Instance, order: Sequence[int], mode: Mode = "circuit") -> float:
    r"""
    Sum the absolute exterior angles a tour turns through.

    At each vertex the angle between the incoming and the outgoing segment, in
    :math:`[0, \pi]`, is added; every vertex counts for a circuit and only interior
    vertices for a path.

    :param inst: Instance with coordinates
    :param order: Permutation of ``1..p``
    :param mode: Whether the order is read as a circuit or a path
    :return: Total turning in radians
    """
    check_mode(mode)
    indices = to_indices(order, inst.p)
    return float(_turning_sums(_points(inst), indices[None, :], mode)[0])


def min_turning_tour(inst: Instance) -> Tour:
    """
    Find the circuit that turns least, by scanning every canonical circuit.

    Ties go to the first circuit in lexicographic order.

    :param inst: Instance with coordinates, at most nine vertices
    :return: The least-turning circuit
    """
    points = _points(inst)
    if inst.p > RELABELING_LIMIT:
        raise TooLargeError(f"'p' must be at most {RELABELING_LIMIT} for a full scan")
    best_order, best_turning = None, math.inf
    for block in batched(canonical_circuits(inst.p), TURNING_BATCH_SIZE):
        sums = np.asarray(_turning_sums(points, block - 1, "circuit"))
        position = int(np.argmin(sums))
        if sums[position] < best_turning - ZERO_TOLERANCE:
            best_turning = float(sums[position])
            best_order = tuple(int(v) for v in block[position])
    return Tour(best_order, tour_weight(inst, best_order))


class NearestNeighbor(CircuitSolver[None]):
    """
    Solver running :func:`nearest_neighbor`.

    :param start: First vertex, 1-based
    """

    start: int = 1

    def solve(self, instance: Instance, solver_state: None = None) -> tuple[Tour, None]:
        """Build the nearest neighbour circuit."""
        del solver_state
        return nearest_neighbor(instance, self.start), None


class ModifiedNearestNeighbor(CircuitSolver[ExclusionMatrices]):
    """
    Solver running :func:`modified_nn`.

    :param policy: ``include_first`` or ``exclude_first``
    :param start: First vertex, 1-based
    """

    policy: Policy = "include_first"
    start: int = 1

    def __check_init__(self):
        """Check that 'policy' is known."""
        if self.policy not in POLICIES:
            raise ValueError(f"'policy' must be one of {POLICIES}")

    def solve(
        self, instance: Instance, solver_state: Optional[ExclusionMatrices] = None
    ) -> tuple[Tour, ExclusionMatrices]:
        """Build the circuit, returning the exclusion matrices as state."""
        if solver_state is None:
            solver_state = build_wea(instance)
        return modified_nn(instance, self.policy, self.start), solver_state


class Contraction(CircuitSolver[None]):
    """Solver running :func:`contraction_tour`."""

    def solve(self, instance: Instance, solver_state: None = None) -> tuple[Tour, None]:
        """Build the contraction circuit."""
        del solver_state
        return contraction_tour(instance), None


class TranspositionV1(Solver[HamPath, Relabeling]):
    """Solver running :func:`transposition_relabeling_v1`; paths use original labels."""

    def solve(
        self, instance: Instance, solver_state: None = None
    ) -> tuple[HamPath, Relabeling]:
        """Relabel and return the diagonal path with the relabelling as state."""
        del solver_state
        result = transposition_relabeling_v1(instance)
        return result.original_path, result


class TranspositionV2(Solver[HamPath, Relabeling]):
    """Solver running :func:`transposition_relabeling_v2`; paths use original labels."""

    def solve(
        self, instance: Instance, solver_state: None = None
    ) -> tuple[HamPath, Relabeling]:
        """Relabel and return the diagonal path with the relabelling as state."""
        del solver_state
        result = transposition_relabeling_v2(instance)
        return result.original_path, result


class AngularSweep(CircuitSolver[SweepFrame]):
    """
    Solver running :func:`angular_sweep`.

    :param clockwise: Sweep clockwise instead of anticlockwise
    """

    clockwise: bool = False

    def solve(
        self, instance: Instance, solver_state: None = None
    ) -> tuple[Tour, SweepFrame]:
        """Sweep the points, returning the sweep frame as state."""
        del solver_state
        return angular_sweep(instance, self.clockwise), sweep_frame(instance)
