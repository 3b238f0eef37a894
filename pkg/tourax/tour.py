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
Tours, paths, edge sublists and the ordered weighted adjacency list.

A Hamiltonian circuit is a :class:`Tour`; a Hamiltonian path is a :class:`HamPath`.
Both store their vertex order with 1-based labels together with the weight that
:func:`tour_weight` assigns to it.

Exact methods work with sets of edges rather than orders. An :class:`EdgeSubList` is a
set of unordered vertex pairs; :func:`validate_sublist` decides whether such a set is
the edge set of a Hamiltonian path or circuit, by degree counting and a union-find
connectivity test, and :func:`sublist_to_order` walks an accepted set into an order.
The :class:`OWAL` lists every edge of an instance by nondecreasing weight, with equal
weights in lexicographic order of their vertex pairs.
"""

from collections import Counter
from collections.abc import Iterable, Sequence
from typing import ClassVar, Optional, Union

import equinox as eqx
import jax.numpy as jnp
import numpy as np
from jaxtyping import Array, Float, Int
from networkx.utils import UnionFind
from typing_extensions import TypeAlias

from tourax.data import Instance
from tourax.util import (
    InfeasibleSublistError,
    Mode,
    TourInstanceMismatchError,
    ZERO_TOLERANCE,
    canonical_circuit,
    canonical_path,
    check_mode,
    to_indices,
)

Edge: TypeAlias = tuple[int, int]

#: Degree of every interior vertex of a Hamiltonian path or circuit.
MAX_DEGREE = 2


def _as_order(order: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in order)


def _as_edge(edge: Sequence[int]) -> Edge:
    i, j = (int(v) for v in edge)
    return (i, j) if i <= j else (j, i)


def _as_edges(edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    return tuple(_as_edge(edge) for edge in edges)


class Tour(eqx.Module):
    """
    Hamiltonian circuit: a permutation of ``1..p`` read cyclically.

    :param order: Vertex sequence, 1-based
    :param weight: Sum of the :math:`p` edge weights along the cycle
    """

    order: tuple[int, ...] = eqx.field(converter=_as_order)
    weight: float = eqx.field(converter=float)
    mode: ClassVar[Mode] = "circuit"

    def __check_init__(self):
        """Check that 'order' is a permutation."""
        to_indices(self.order, len(self.order))

    @property
    def p(self) -> int:
        """Number of vertices visited."""
        return len(self.order)

    def edges(self) -> tuple[Edge, ...]:
        """Return the unordered vertex pairs used by the circuit."""
        closing = (self.order[-1], self.order[0])
        return _as_edges([*zip(self.order[:-1], self.order[1:]), closing])


class HamPath(eqx.Module):
    """
    Hamiltonian path: a permutation of ``1..p`` read as an open walk.

    :param order: Vertex sequence, 1-based
    :param weight: Sum of the :math:`p - 1` edge weights along the walk
    """

    order: tuple[int, ...] = eqx.field(converter=_as_order)
    weight: float = eqx.field(converter=float)
    mode: ClassVar[Mode] = "path"

    def __check_init__(self):
        """Check that 'order' is a permutation."""
        to_indices(self.order, len(self.order))

    @property
    def p(self) -> int:
        """Number of vertices visited."""
        return len(self.order)

    def edges(self) -> tuple[Edge, ...]:
        """Return the unordered vertex pairs used by the path."""
        return _as_edges(zip(self.order[:-1], self.order[1:]))


Solution: TypeAlias = Union[Tour, HamPath]


class EdgeSubList(eqx.Module):
    """
    Set of unordered vertex pairs drawn from an instance.

    :param edges: Vertex pairs ``(i, j)`` with ``i != j``; stored with ``i < j``
    :param weight: Sum of the instance weights of 'edges'
    :param indices: Positions in the :class:`OWAL` the edges were taken from, if any
    """

    edges: tuple[Edge, ...] = eqx.field(converter=_as_edges)
    weight: float = eqx.field(default=0.0, converter=float)
    indices: Optional[tuple[int, ...]] = None

    def __check_init__(self):
        """Check for loops and repeated pairs."""
        if any(i == j for i, j in self.edges):
            raise ValueError("'edges' must not contain loops")
        if any(i < 1 for i, _ in self.edges):
            raise ValueError("'edges' must use 1-based vertex labels")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("'edges' must not repeat a vertex pair")

    def __len__(self) -> int:
        """Return the number of edges."""
        return len(self.edges)

    @classmethod
    def from_edges(
        cls, inst: Instance, edges: Iterable[Sequence[int]]
    ) -> "EdgeSubList":
        """Build a sublist of 'inst', weighing its edges."""
        edges = _as_edges(edges)
        weights = np.asarray(inst.weights)
        return cls(edges, sum(float(weights[i - 1, j - 1]) for i, j in edges))


class OWAL(eqx.Module):
    """
    Ordered weighted adjacency list: every edge of an instance by nondecreasing weight.

    :param weights: Edge weights, nondecreasing
    :param edges: 1-based vertex pairs aligned with 'weights'
    """

    weights: Float[Array, " m"]
    edges: Int[Array, "m 2"]

    def __len__(self) -> int:
        """Return the number of edges, :math:`p(p-1)/2`."""
        return self.weights.shape[0]

    @property
    def entries(self) -> list[tuple[float, Edge]]:
        """Return the list as ``(weight, (i, j))`` pairs."""
        edges = np.asarray(self.edges)
        return [
            (float(w), (int(i), int(j)))
            for w, (i, j) in zip(np.asarray(self.weights), edges)
        ]


def tour_weight(inst: Instance, order: Sequence[int], mode: Mode = "circuit") -> float:
    """
    Sum the weights along a vertex sequence.

    :param inst: Instance the order refers to
    :param order: Permutation of ``1..p``
    :param mode: ``circuit`` adds the closing edge from the last vertex to the first
    :return: The total weight
    """
    check_mode(mode)
    indices = jnp.asarray(to_indices(order, inst.p))
    following = jnp.roll(indices, -1) if mode == "circuit" else indices[1:]
    leading = indices if mode == "circuit" else indices[:-1]
    return float(jnp.sum(inst.weights[leading, following]))


def make_solution(inst: Instance, order: Sequence[int], mode: Mode) -> Solution:
    """
    Build the canonical :class:`Tour` or :class:`HamPath` through 'order'.

    :param inst: Instance the order refers to
    :param order: Permutation of ``1..p``
    :param mode: Whether to close the walk
    :return: The canonicalised solution, weighed on 'inst'
    """
    if check_mode(mode) == "circuit":
        order = canonical_circuit(order)
        return Tour(order, tour_weight(inst, order, mode))
    order = canonical_path(order)
    return HamPath(order, tour_weight(inst, order, mode))


def check_solution(inst: Instance, solution: Solution) -> None:
    """
    Check that 'solution' visits exactly the vertices of 'inst' and is weighed on it.

    :param inst: Instance the solution claims to belong to
    :param solution: Tour or path to check
    """
    if solution.p != inst.p:
        raise TourInstanceMismatchError(
            f"solution visits {solution.p} vertices but the instance has {inst.p}"
        )
    recomputed = tour_weight(inst, solution.order, solution.mode)
    if abs(recomputed - solution.weight) > ZERO_TOLERANCE * max(1.0, recomputed):
        raise TourInstanceMismatchError(
            f"solution weight {solution.weight} does not match {recomputed}"
        )


def build_owal(inst: Instance) -> OWAL:
    """
    Sort the edges of an instance by weight.

    Equal weights keep lexicographic order of their vertex pairs.

    :param inst: Instance to sort
    :return: The ordered weighted adjacency list
    """
    rows, cols = jnp.triu_indices(inst.p, k=1)
    weights = inst.weights[rows, cols]
    # Last key is primary.
    order = jnp.lexsort((cols, rows, weights))
    edges = jnp.stack([rows[order], cols[order]], axis=-1) + 1
    return OWAL(weights[order], edges)


def check_edge_set(p: int, edges: Sequence[Sequence[int]], mode: Mode) -> bool:
    """
    Decide whether 'edges' is the edge set of a Hamiltonian path or circuit.

    A path needs :math:`p - 1` edges, two vertices of degree one and all others of
    degree two; a circuit needs :math:`p` edges and every vertex of degree two. In both
    cases every vertex of ``1..p`` must be covered and the edges must be connected.
    Repeated pairs are allowed in the input and always fail the test.

    :param p: Vertex count
    :param edges: Vertex pairs, 1-based
    :param mode: Which structure to test for
    :return: :data:`True` if the edges form the requested structure
    """
    expected = p if mode == "circuit" else p - 1
    if len(edges) != expected:
        return False
    degree: Counter = Counter()
    pairs = set()
    for i, j in edges:
        if i == j or not (1 <= i <= p and 1 <= j <= p):
            return False
        pair = (min(i, j), max(i, j))
        if pair in pairs:
            return False
        pairs.add(pair)
        degree[i] += 1
        degree[j] += 1
    if len(degree) != p:
        return False
    ends = sum(1 for d in degree.values() if d == 1)
    if any(d > MAX_DEGREE for d in degree.values()):
        return False
    if ends != (0 if mode == "circuit" else MAX_DEGREE):
        return False
    components = UnionFind(range(1, p + 1))
    for i, j in edges:
        components.union(i, j)
    return len(list(components.to_sets())) == 1


def validate_sublist(
    inst: Instance, sublist: Union[EdgeSubList, Iterable[Sequence[int]]], mode: Mode
) -> bool:
    """
    Decide whether an edge sublist is a Hamiltonian path or circuit of an instance.

    Malformed sublists, such as those with labels outside ``1..p``, are rejected
    rather than raising.

    :param inst: Instance the edges are drawn from
    :param sublist: Edge sublist or iterable of vertex pairs
    :param mode: Which structure to test for
    :return: :data:`True` if the sublist is a Hamiltonian path or circuit
    """
    check_mode(mode)
    edges = sublist.edges if isinstance(sublist, EdgeSubList) else list(sublist)
    return check_edge_set(inst.p, edges, mode)


def sublist_to_order(
    sublist: Union[EdgeSubList, Iterable[Sequence[int]]], mode: Mode
) -> tuple[int, ...]:
    """
    Walk a Hamiltonian path or circuit edge set into a vertex order.

    Circuits start at vertex ``1`` and step to the smaller of its two neighbours;
    paths start at their smaller endpoint.

    :param sublist: Edge set accepted by :func:`validate_sublist` for 'mode'
    :param mode: Whether the edges form a path or a circuit
    :return: The canonical vertex order
    """
    check_mode(mode)
    edges = _as_edges(sublist.edges if isinstance(sublist, EdgeSubList) else sublist)
    vertices = {v for edge in edges for v in edge}
    p = len(vertices)
    if vertices != set(range(1, p + 1)) or not check_edge_set(p, edges, mode):
        raise InfeasibleSublistError(f"edges do not form a Hamiltonian {mode}")
    neighbours: dict[int, list[int]] = {v: [] for v in vertices}
    for i, j in edges:
        neighbours[i].append(j)
        neighbours[j].append(i)
    if mode == "circuit":
        start = 1
    else:
        start = min(v for v, adjacent in neighbours.items() if len(adjacent) == 1)
    order = [start]
    previous = None
    while len(order) < p:
        current = order[-1]
        step = min(v for v in neighbours[current] if v != previous)
        previous = current
        order.append(step)
    return canonical_circuit(order) if mode == "circuit" else canonical_path(order)
