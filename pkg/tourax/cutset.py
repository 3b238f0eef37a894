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
Spanning trees, fundamental cutset matrices and Hamiltonicity through chord selections.

Fix a spanning tree :math:`T` of a connected graph :math:`G` with :math:`p` vertices.
Every branch :math:`b` of :math:`T` defines a fundamental cutset, the edges crossing the
cut left when :math:`b` is deleted from :math:`T`. Writing one row per branch and one
column per edge gives the fundamental cutset matrix :math:`C_f = [C_c : I_{p-1}]`,
whose chord part :math:`C_c` marks, for every chord, the branches on the tree path
between its endpoints.

A Hamiltonian circuit crosses every cut an even, nonzero number of times. So choosing
the chords of a circuit fixes its branches: a branch belongs to the circuit exactly
when an odd number of the chosen chords cross its cutset. :func:`decide_hamiltonian`
scans chord subsets in that light, and :func:`verify_selection` checks a proposed
selection against the same conditions.

:func:`cutset_tsp_greedy` turns the construction into a tour heuristic on complete
weighted graphs: it grows a set of chord columns whose row incidences form a tree,
cheapest first, and extends each complete set with the branches on its odd rows.
"""

import heapq
import logging
import warnings
from collections import Counter
from collections.abc import Collection, Iterable, Iterator, Sequence
from typing import Optional

import equinox as eqx
import jax.numpy as jnp
import jax.random as jr
import networkx as nx
import numpy as np
from jaxtyping import Array, Int

from tourax.data import Instance
from tourax.solvers.base import BudgetedSolver, CircuitSolver
from tourax.tour import (
    MAX_DEGREE,
    Edge,
    Tour,
    check_edge_set,
    sublist_to_order,
    tour_weight,
)
from tourax.util import (
    DEFAULT_BUDGET,
    ZERO_TOLERANCE,
    BudgetExhaustedError,
    DisconnectedGraphError,
    GreedyStuckError,
    NotASpanningTreeError,
    VertexIndexError,
    check_budget,
)

_logger = logging.getLogger(__name__)

#: Smallest vertex count of a graph.
MIN_GRAPH_VERTICES = 2


def _as_edges(edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    pairs = []
    for edge in edges:
        i, j = (int(v) for v in edge)
        pairs.append((min(i, j), max(i, j)))
    return tuple(pairs)


def _as_floats(values: Optional[Iterable[float]]) -> Optional[tuple[float, ...]]:
    return None if values is None else tuple(float(v) for v in values)


def _as_labels(labels: Optional[Iterable[str]]) -> Optional[tuple[str, ...]]:
    return None if labels is None else tuple(str(label) for label in labels)


def _pair_label(edge: Edge) -> str:
    return f"{edge[0]}-{edge[1]}"


class SimpleGraph(eqx.Module):
    """
    Undirected graph on vertices ``1..p`` with optionally weighted, labelled edges.

    Parallel edges are admitted only when every edge carries a distinct label, so that
    each one can still be named; self-loops are always rejected.

    :param p: Vertex count
    :param edges: Vertex pairs, 1-based
    :param weights: Optional weight per edge
    :param labels: Optional name per edge; unlabelled edges are named ``"i-j"``
    """

    p: int = eqx.field(converter=int)
    edges: tuple[Edge, ...] = eqx.field(converter=_as_edges)
    weights: Optional[tuple[float, ...]] = eqx.field(default=None, converter=_as_floats)
    labels: Optional[tuple[str, ...]] = eqx.field(default=None, converter=_as_labels)

    def __check_init__(self):
        """Check vertex range, loops, and label and weight alignment."""
        if self.p < MIN_GRAPH_VERTICES:
            raise ValueError("'p' must be at least 2")
        for i, j in self.edges:
            if i < 1 or j > self.p:
                raise VertexIndexError(f"edge ({i}, {j}) outside 1..{self.p}")
            if i == j:
                raise ValueError("'edges' must not contain self-loops")
        if self.weights is not None and len(self.weights) != self.q:
            raise ValueError("'weights' must hold one weight per edge")
        if self.labels is None:
            if len(set(self.edges)) != self.q:
                raise ValueError("parallel edges must carry distinct labels")
        elif len(self.labels) != self.q or len(set(self.labels)) != self.q:
            raise ValueError("'labels' must name every edge exactly once")

    @property
    def q(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @property
    def edge_labels(self) -> tuple[str, ...]:
        """Edge names, given or derived from the vertex pairs."""
        if self.labels is not None:
            return self.labels
        return tuple(_pair_label(edge) for edge in self.edges)

    def index(self, label: str) -> int:
        """Return the position of the edge named 'label'."""
        try:
            return self.edge_labels.index(label)
        except ValueError as err:
            raise ValueError(f"unknown edge label {label!r}") from err

    def weight(self, index: int) -> float:
        """Return the weight of edge 'index', one when the graph is unweighted."""
        return 1.0 if self.weights is None else self.weights[index]

    def to_networkx(self) -> nx.MultiGraph:
        """Return the graph as a :class:`networkx.MultiGraph` keyed by edge position."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(1, self.p + 1))
        for index, (label, (i, j)) in enumerate(zip(self.edge_labels, self.edges)):
            graph.add_edge(i, j, key=index, label=label, weight=self.weight(index))
        return graph

    def is_connected(self) -> bool:
        """Whether every vertex is reachable from every other."""
        return nx.is_connected(self.to_networkx())

    @classmethod
    def from_instance(cls, inst: Instance) -> "SimpleGraph":
        """Build the weighted complete graph of 'inst', edges in lexicographic order."""
        rows, cols = np.triu_indices(inst.p, k=1)
        weights = np.asarray(inst.weights)[rows, cols]
        return cls(inst.p, zip(rows + 1, cols + 1), weights)


class SpanningTree(eqx.Module):
    """
    Set of :math:`p - 1` branches chosen from a host graph.

    Whether the branches really span their host graph is checked when the tree is paired
    with a graph, by :func:`build_fcutset_matrix`.

    :param branches: Vertex pairs, 1-based
    """

    branches: tuple[Edge, ...] = eqx.field(converter=_as_edges)


class FCutsetMatrix(eqx.Module):
    r"""
    Fundamental cutset matrix :math:`[C_c : I_{p-1}]` of a graph and spanning tree.

    :param chord_part: Binary :math:`(p - 1) \times (q - p + 1)` matrix :math:`C_c`
    :param branches: Host graph edge position of the branch behind each row
    :param chords: Host graph edge position of the chord behind each column of
        'chord_part'
    :param row_labels: Branch names, one per row
    :param chord_labels: Chord names, one per column of 'chord_part'
    """

    chord_part: Int[Array, "r c"]
    branches: tuple[int, ...]
    chords: tuple[int, ...]
    row_labels: tuple[str, ...]
    chord_labels: tuple[str, ...]

    def __check_init__(self):
        """Check the chord part matches the labels and is binary."""
        if self.chord_part.shape != (len(self.branches), len(self.chords)):
            raise ValueError("'chord_part' must be rows by chord columns")
        if bool(jnp.any((self.chord_part != 0) & (self.chord_part != 1))):
            raise ValueError("'chord_part' must be binary")

    @property
    def entries(self) -> Int[Array, "r q"]:
        """Return the full matrix, chord columns then the identity."""
        identity = jnp.eye(len(self.branches), dtype=self.chord_part.dtype)
        return jnp.concatenate([self.chord_part, identity], axis=1)

    @property
    def column_labels(self) -> tuple[str, ...]:
        """Names of every column of :attr:`entries`."""
        return self.chord_labels + self.row_labels

    def column_rows(self, label: str) -> tuple[int, ...]:
        """Return the 1-based rows marked in the chord column named 'label'."""
        column = self.chord_labels.index(label)
        marked = np.flatnonzero(np.asarray(self.chord_part)[:, column])
        return tuple(int(r) + 1 for r in marked)


class ChordSelection(eqx.Module):
    """
    Chords together with the branches their cutset incidences call for.

    :param chords: Names of the selected chords
    :param branches: Names of the selected branches
    """

    chords: tuple[str, ...] = eqx.field(converter=_as_labels)
    branches: tuple[str, ...] = eqx.field(converter=_as_labels)

    @property
    def total(self) -> int:
        """Number of selected edges."""
        return len(self.chords) + len(self.branches)


class HamiltonianDecision(eqx.Module):
    """
    Outcome of :func:`decide_hamiltonian`.

    :param selection: First accepted chord selection, or :data:`None` when none exists
    :param order: Canonical circuit through the selected edges
    :param nodes_explored: Chord insertions tried by the search
    """

    selection: Optional[ChordSelection]
    order: Optional[tuple[int, ...]]
    nodes_explored: int

    @property
    def found(self) -> bool:
        """Whether a Hamiltonian circuit was found."""
        return self.selection is not None


class CutsetConstruction(eqx.Module):
    """
    Tour built from a chord selection on a complete weighted graph.

    :param selection: Chords and branches making up the tour
    :param tour: The resulting circuit
    :param nodes_explored: Chord sets examined
    """

    selection: ChordSelection
    tour: Tour
    nodes_explored: int


def gen_random_graph(seed: int, p: int, density: float = 0.5) -> SimpleGraph:
    """
    Generate a reproducible random connected graph.

    A random spanning tree is drawn first, each vertex in a random order attaching to a
    uniformly chosen earlier one; every remaining vertex pair is then added with
    probability 'density'.

    :param seed: Integer seed for :func:`jax.random.key`
    :param p: Vertex count, at least two
    :param density: Probability of each non-tree edge
    :return: The generated graph, edges sorted lexicographically
    """
    if p < MIN_GRAPH_VERTICES:
        raise ValueError("'p' must be at least 2")
    if not 0.0 <= density <= 1.0:
        raise ValueError("'density' must lie in [0, 1]")
    order_key, parent_key, extra_key = jr.split(jr.key(seed), 3)
    order = np.asarray(jr.permutation(order_key, p)) + 1
    parents = np.asarray(jr.randint(parent_key, (p - 1,), 0, jnp.arange(1, p)))
    edges = {
        (int(min(v, order[u])), int(max(v, order[u])))
        for v, u in zip(order[1:], parents)
    }
    draws = np.asarray(jr.uniform(extra_key, (p, p)))
    rows, cols = np.triu_indices(p, k=1)
    for i, j in zip(rows, cols):
        if draws[i, j] < density:
            edges.add((int(i) + 1, int(j) + 1))
    return SimpleGraph(p, sorted(edges))


def default_spanning_tree(g: SimpleGraph) -> SpanningTree:
    """
    Choose a spanning tree when the caller supplies none.

    The star at vertex ``1`` is used when all of its edges are present; otherwise the
    breadth-first tree from vertex ``1``, neighbours visited in increasing order.

    :param g: Connected host graph
    :return: The spanning tree
    """
    star = [(1, v) for v in range(2, g.p + 1)]
    if set(star) <= set(g.edges):
        return SpanningTree(star)
    graph = nx.Graph(g.to_networkx())
    if not nx.is_connected(graph):
        raise DisconnectedGraphError("graph has no spanning tree")
    return SpanningTree(nx.bfs_edges(graph, 1, sort_neighbors=sorted))


def _match_branches(g: SimpleGraph, t: SpanningTree) -> tuple[int, ...]:
    """Map each branch to the first unused host graph edge joining the same vertices."""
    if len(t.branches) != g.p - 1:
        raise NotASpanningTreeError(
            f"a spanning tree of {g.p} vertices needs {g.p - 1} branches, "
            f"got {len(t.branches)}"
        )
    tree = nx.Graph()
    tree.add_nodes_from(range(1, g.p + 1))
    tree.add_edges_from(t.branches)
    if tree.number_of_nodes() != g.p or not nx.is_tree(tree):
        raise NotASpanningTreeError("branches must form a tree spanning 1..p")
    used: list[int] = []
    for branch in t.branches:
        index = next(
            (k for k, edge in enumerate(g.edges) if edge == branch and k not in used),
            None,
        )
        if index is None:
            raise NotASpanningTreeError(f"branch {branch} is not an edge of the graph")
        used.append(index)
    return tuple(used)


def build_fcutset_matrix(
    g: SimpleGraph, t: Optional[SpanningTree] = None
) -> FCutsetMatrix:
    """
    Build the fundamental cutset matrix of a graph with respect to a spanning tree.

    The row of branch :math:`b` marks every chord whose fundamental cycle runs through
    :math:`b`; the rows are found by walking the tree path between the chord's ends.

    :param g: Connected host graph
    :param t: Spanning tree of 'g'; :func:`default_spanning_tree` when omitted
    :return: The matrix, rows in branch order and chord columns in graph edge order
    """
    if not g.is_connected():
        raise DisconnectedGraphError("cutset matrices need a connected graph")
    t = default_spanning_tree(g) if t is None else t
    branches = _match_branches(g, t)
    chords = tuple(k for k in range(g.q) if k not in set(branches))
    tree = nx.Graph()
    for row, index in enumerate(branches):
        tree.add_edge(*g.edges[index], row=row)
    chord_part = np.zeros((len(branches), len(chords)), dtype=np.int32)
    for column, index in enumerate(chords):
        path = nx.shortest_path(tree, *g.edges[index])
        for u, v in zip(path[:-1], path[1:]):
            chord_part[tree.edges[u, v]["row"], column] = 1
    labels = g.edge_labels
    return FCutsetMatrix(
        jnp.asarray(chord_part),
        branches,
        chords,
        tuple(labels[k] for k in branches),
        tuple(labels[k] for k in chords),
    )


def build_lattice_graph(m: FCutsetMatrix) -> nx.Graph:
    """
    Build the lattice cutset graph of a fundamental cutset matrix.

    There is one vertex ``(row, column)`` per unit entry of the full matrix (0-based
    positions), a vertical path through the unit entries of every column and a
    horizontal path through the unit entries of every row. Edges carry a ``kind``
    attribute, ``"vertical"`` or ``"horizontal"``.

    :param m: Fundamental cutset matrix
    :return: The lattice graph
    """
    entries = np.asarray(m.entries)
    lattice = nx.Graph()
    labels = m.column_labels
    for r, c in zip(*np.nonzero(entries)):
        lattice.add_node((int(r), int(c)), row=m.row_labels[r], column=labels[c])
    for c in range(entries.shape[1]):
        rows = [int(r) for r in np.flatnonzero(entries[:, c])]
        lattice.add_edges_from(
            (((a, c), (b, c)) for a, b in zip(rows[:-1], rows[1:])), kind="vertical"
        )
    for r in range(entries.shape[0]):
        cols = [int(c) for c in np.flatnonzero(entries[r])]
        lattice.add_edges_from(
            (((r, a), (r, b)) for a, b in zip(cols[:-1], cols[1:])), kind="horizontal"
        )
    return lattice


def _column_masks(m: FCutsetMatrix) -> list[int]:
    """Encode each chord column's rows as a bitmask, row ``r`` at bit ``r``."""
    chord_part = np.asarray(m.chord_part)
    return [
        sum(1 << int(r) for r in np.flatnonzero(chord_part[:, c]))
        for c in range(chord_part.shape[1])
    ]


def _odd_rows(masks: Sequence[int], columns: Iterable[int], rows: int) -> list[int]:
    parity = 0
    for column in columns:
        parity ^= masks[column]
    return [r for r in range(rows) if parity >> r & 1]


def _selection_edges(
    g: SimpleGraph, m: FCutsetMatrix, columns: Iterable[int], rows: Iterable[int]
) -> list[Edge]:
    chords = [g.edges[m.chords[c]] for c in columns]
    return chords + [g.edges[m.branches[r]] for r in rows]


def _as_selection(
    m: FCutsetMatrix, columns: Iterable[int], rows: Iterable[int]
) -> ChordSelection:
    return ChordSelection(
        [m.chord_labels[c] for c in sorted(columns)],
        [m.row_labels[r] for r in sorted(rows)],
    )


def _chord_columns(m: FCutsetMatrix, labels: Iterable[str], name: str) -> list[int]:
    columns = []
    for label in labels:
        if label not in m.chord_labels:
            raise ValueError(f"'{name}' must name chords, got {label!r}")
        columns.append(m.chord_labels.index(label))
    return columns


class _ChordScan:
    """
    Chord subsets whose odd-row extension is a Hamiltonian circuit.

    Subsets are visited by increasing size, lexicographically within a size. Chords
    that would give a vertex degree three are pruned, and every chord insertion counts
    towards the budget.
    """

    def __init__(
        self,
        g: SimpleGraph,
        m: FCutsetMatrix,
        budget: int,
        required: Collection[int] = (),
        forbidden: Collection[int] = (),
    ):
        self.g = g
        self.m = m
        self.budget = check_budget(budget)
        self.masks = _column_masks(m)
        self.rows = len(m.branches)
        self.required = frozenset(required)
        self.candidates = [c for c in range(len(m.chords)) if c not in set(forbidden)]
        self.explored = 0

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        largest = min(len(self.candidates), self.g.p)
        for size in range(max(1, len(self.required)), largest + 1):
            yield from self._extend([], 0, size, Counter())

    def _extend(
        self, chosen: list[int], start: int, size: int, degree: Counter
    ) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        if len(chosen) == size:
            if not self.required <= set(chosen):
                return
            rows = _odd_rows(self.masks, chosen, self.rows)
            if size + len(rows) != self.g.p:
                return
            edges = _selection_edges(self.g, self.m, chosen, rows)
            if check_edge_set(self.g.p, edges, "circuit"):
                yield tuple(chosen), tuple(rows)
            return
        for position in range(start, len(self.candidates)):
            if len(self.candidates) - position < size - len(chosen):
                break
            column = self.candidates[position]
            self.explored += 1
            if self.explored > self.budget:
                raise BudgetExhaustedError(
                    f"chord search stopped after {self.budget} nodes", self.budget
                )
            i, j = self.g.edges[self.m.chords[column]]
            if degree[i] < MAX_DEGREE and degree[j] < MAX_DEGREE:
                degree[i] += 1
                degree[j] += 1
                chosen.append(column)
                yield from self._extend(chosen, position + 1, size, degree)
                chosen.pop()
                degree[i] -= 1
                degree[j] -= 1
            # A required chord cannot be skipped.
            if column in self.required:
                break


def decide_hamiltonian(
    g: SimpleGraph,
    t: Optional[SpanningTree] = None,
    budget: int = DEFAULT_BUDGET,
    required: Iterable[str] = (),
    forbidden: Iterable[str] = (),
) -> HamiltonianDecision:
    """
    Decide whether a graph has a Hamiltonian circuit by scanning chord selections.

    Chord subsets are tried by increasing size and lexicographically within a size.
    For each subset the branches on rows crossed an odd number of times are added; the
    subset is accepted when the chosen edges number :math:`p` and form a single circuit
    through every vertex. Since a circuit's chords determine its branches, exhausting
    the scan proves the graph has no Hamiltonian circuit.

    :param g: Connected graph
    :param t: Spanning tree of 'g'; :func:`default_spanning_tree` when omitted
    :param budget: Maximum chord insertions tried
    :param required: Chord names every accepted selection must contain
    :param forbidden: Chord names no accepted selection may contain
    :return: The first accepted selection and its circuit, or a negative decision
    """
    m = build_fcutset_matrix(g, t)
    scan = _ChordScan(
        g,
        m,
        budget,
        _chord_columns(m, required, "required"),
        _chord_columns(m, forbidden, "forbidden"),
    )
    try:
        columns, rows = next(iter(scan))
    except StopIteration:
        _logger.info("No Hamiltonian circuit after %d chord insertions", scan.explored)
        return HamiltonianDecision(None, None, scan.explored)
    order = sublist_to_order(_selection_edges(g, m, columns, rows), "circuit")
    _logger.info("Hamiltonian circuit found after %d chord insertions", scan.explored)
    return HamiltonianDecision(_as_selection(m, columns, rows), order, scan.explored)


def verify_selection(
    g: SimpleGraph, t: Optional[SpanningTree], sel: ChordSelection
) -> bool:
    """
    Check a chord selection against the cutset characterisation of Hamiltonicity.

    Every row must be crossed by the selection, chords plus its own branch, an even
    number of at least two times; the selection must hold exactly :math:`p` edges; and
    those edges must form a circuit through every vertex.

    :param g: Connected graph
    :param t: Spanning tree of 'g'; :func:`default_spanning_tree` when omitted
    :param sel: Selection to check, by edge name
    :return: :data:`True` if every condition holds
    """
    m = build_fcutset_matrix(g, t)
    if not sel.chords or len(set(sel.chords)) != len(sel.chords):
        return False
    if len(set(sel.branches)) != len(sel.branches):
        return False
    if not set(sel.chords) <= set(m.chord_labels):
        return False
    if not set(sel.branches) <= set(m.row_labels):
        return False
    columns = [m.chord_labels.index(label) for label in sel.chords]
    rows = [m.row_labels.index(label) for label in sel.branches]
    crossings = np.asarray(m.chord_part)[:, columns].sum(axis=1)
    crossings[rows] += 1
    if np.any(crossings % 2) or np.any(crossings < MAX_DEGREE):
        return False
    if sel.total != g.p:
        return False
    return check_edge_set(g.p, _selection_edges(g, m, columns, rows), "circuit")


def full_chord_columns(m: FCutsetMatrix) -> tuple[str, ...]:
    """
    Return the chords whose column is all ones.

    Such a chord crosses every fundamental cutset, so together with every branch it
    closes a Hamiltonian circuit.
    """
    chord_part = np.asarray(m.chord_part)
    return tuple(
        label for label, column in zip(m.chord_labels, chord_part.T) if column.all()
    )


def single_overlap_pairs(m: FCutsetMatrix) -> list[ChordSelection]:
    """
    Find chord pairs covering every row with exactly one shared row.

    The shared row's branch is dropped and every other branch kept, which gives
    :math:`p` edges with every row crossed exactly twice.

    :param m: Fundamental cutset matrix
    :return: One selection per qualifying pair, in lexicographic pair order
    """
    masks = _column_masks(m)
    full = (1 << len(m.branches)) - 1
    pairs = []
    for a, first in enumerate(masks):
        for b in range(a + 1, len(masks)):
            overlap = first & masks[b]
            if first | masks[b] == full and bin(overlap).count("1") == 1:
                rows = [r for r in range(len(m.branches)) if not overlap >> r & 1]
                pairs.append(_as_selection(m, (a, b), rows))
    return pairs


def _incidence_graph(m: FCutsetMatrix, columns: Iterable[int]) -> nx.Graph:
    """Bipartite graph joining each chosen column to the rows it marks."""
    chord_part = np.asarray(m.chord_part)
    graph = nx.Graph()
    for column in columns:
        graph.add_node(("column", column))
        for r in np.flatnonzero(chord_part[:, column]):
            graph.add_edge(("column", column), ("row", int(r)))
    return graph


def is_induced_cutset_tree(m: FCutsetMatrix, chords: Iterable[str]) -> bool:
    """
    Check that chosen chord columns form an induced cutset tree.

    The columns' part of the lattice cutset graph must be connected and reach every
    row, which holds exactly when the column-row incidence graph does.

    :param m: Fundamental cutset matrix
    :param chords: Chosen chord names
    :return: :data:`True` for an induced cutset tree
    """
    columns = _chord_columns(m, chords, "chords")
    if not columns:
        return False
    graph = _incidence_graph(m, columns)
    rows = {node for node in graph if node[0] == "row"}
    return len(rows) == len(m.branches) and nx.is_connected(graph)


def extend_induced_tree(m: FCutsetMatrix, chords: Iterable[str]) -> ChordSelection:
    """
    Extend an induced cutset tree with the branches on its odd rows.

    :param m: Fundamental cutset matrix
    :param chords: Chord names forming an induced cutset tree
    :return: The chords together with every branch whose row they cross an odd
        number of times
    """
    chords = list(chords)
    if not is_induced_cutset_tree(m, chords):
        raise ValueError("'chords' must form an induced cutset tree")
    columns = _chord_columns(m, chords, "chords")
    rows = _odd_rows(_column_masks(m), columns, len(m.branches))
    return _as_selection(m, columns, rows)


def _complete_graph_matrix(
    inst: Instance, t: Optional[SpanningTree]
) -> tuple[SimpleGraph, FCutsetMatrix]:
    g = SimpleGraph.from_instance(inst)
    return g, build_fcutset_matrix(g, t)


def grow_cutset_tree(
    inst: Instance, t: Optional[SpanningTree] = None, budget: int = DEFAULT_BUDGET
) -> CutsetConstruction:
    """
    Grow induced cutset trees cheapest first and keep the best circuit they extend to.

    Sets of chord columns are expanded in order of total chord weight. A set grows by
    one column that shares exactly one row with the rows already covered, so the
    column-row incidences always form a tree, and no vertex may reach three chords.
    Once a set covers every row it is extended by the branches on its odd rows; when
    that gives a Hamiltonian circuit, the circuit is scored by weight with ties going
    to the smaller canonical order. Growth stops once the cheapest open set already
    weighs more than the best circuit.

    :param inst: Instance, read as a complete weighted graph
    :param t: Spanning tree; the star at vertex ``1`` when omitted
    :param budget: Maximum chord sets examined
    :return: The best selection found and its circuit
    """
    budget = check_budget(budget)
    g, m = _complete_graph_matrix(inst, t)
    masks = _column_masks(m)
    weights = [g.weight(k) for k in m.chords]
    endpoints = [g.edges[k] for k in m.chords]
    full = (1 << len(m.branches)) - 1
    frontier = [(weights[c], (c,)) for c in range(len(masks))]
    heapq.heapify(frontier)
    seen = {columns for _, columns in frontier}
    best: Optional[tuple[float, tuple[int, ...], tuple[int, ...], list[int]]] = None
    explored = 0
    while frontier:
        chord_weight, columns = heapq.heappop(frontier)
        if best is not None and chord_weight > best[0] + ZERO_TOLERANCE:
            break
        explored += 1
        if explored > budget:
            raise BudgetExhaustedError(
                f"cutset tree growth stopped after {budget} chord sets", budget
            )
        covered = 0
        degree: Counter = Counter()
        for column in columns:
            covered |= masks[column]
            degree.update(endpoints[column])
        if covered == full:
            rows = _odd_rows(masks, columns, len(m.branches))
            edges = _selection_edges(g, m, columns, rows)
            if len(edges) == inst.p and check_edge_set(inst.p, edges, "circuit"):
                order = sublist_to_order(edges, "circuit")
                weight = tour_weight(inst, order)
                _logger.debug("Chord set %s closes %s", columns, order)
                if best is None or (weight, order) < best[:2]:
                    best = (weight, order, columns, rows)
        if len(columns) >= inst.p:
            continue
        for column, mask in enumerate(masks):
            i, j = endpoints[column]
            if column in columns or bin(mask & covered).count("1") != 1:
                continue
            if degree[i] >= MAX_DEGREE or degree[j] >= MAX_DEGREE:
                continue
            child = tuple(sorted((*columns, column)))
            if child not in seen:
                seen.add(child)
                heapq.heappush(frontier, (chord_weight + weights[column], child))
    if best is None:
        raise GreedyStuckError(
            f"no induced cutset tree closes a circuit after {explored} chord sets"
        )
    weight, order, columns, rows = best
    _logger.info("Cutset tree growth examined %d chord sets", explored)
    return CutsetConstruction(
        _as_selection(m, columns, rows), Tour(order, weight), explored
    )


def cutset_tsp_greedy(
    inst: Instance, t: Optional[SpanningTree] = None, budget: int = DEFAULT_BUDGET
) -> Tour:
    """
    Build a circuit with :func:`grow_cutset_tree`.

    :param inst: Instance, read as a complete weighted graph
    :param t: Spanning tree; the star at vertex ``1`` when omitted
    :param budget: Maximum chord sets examined
    :return: The circuit
    """
    return grow_cutset_tree(inst, t, budget).tour


def cutset_min_selection(
    inst: Instance, t: Optional[SpanningTree] = None, budget: int = DEFAULT_BUDGET
) -> CutsetConstruction:
    """
    Find the cheapest Hamiltonian chord selection by scanning every chord subset.

    :param inst: Instance, read as a complete weighted graph
    :param t: Spanning tree; the star at vertex ``1`` when omitted
    :param budget: Maximum chord insertions tried
    :return: The lightest selection, ties going to the smaller canonical order
    """
    g, m = _complete_graph_matrix(inst, t)
    scan = _ChordScan(g, m, budget)
    best = None
    for columns, rows in scan:
        order = sublist_to_order(_selection_edges(g, m, columns, rows), "circuit")
        candidate = (tour_weight(inst, order), order, columns, rows)
        if best is None or candidate[:2] < best[:2]:
            best = candidate
    if best is None:
        raise GreedyStuckError("no chord selection closes a Hamiltonian circuit")
    weight, order, columns, rows = best
    return CutsetConstruction(
        _as_selection(m, columns, rows), Tour(order, weight), scan.explored
    )


class CutsetSolver(CircuitSolver[CutsetConstruction], BudgetedSolver):
    """
    Solver running :func:`grow_cutset_tree`.

    :param budget: Maximum chord sets examined
    :param tree: Spanning tree; the star at vertex ``1`` when omitted
    :param fallback: Whether to scan every chord subset when growth gets stuck
    """

    tree: Optional[SpanningTree] = None
    fallback: bool = True

    def solve(
        self, instance: Instance, solver_state: None = None
    ) -> tuple[Tour, CutsetConstruction]:
        """Build a circuit from a chord selection; 'solver_state' is unused."""
        del solver_state
        try:
            construction = grow_cutset_tree(instance, self.tree, self.budget)
        except GreedyStuckError:
            if not self.fallback:
                raise
            warnings.warn(
                "cutset tree growth got stuck; scanning every chord subset instead",
                stacklevel=2,
            )
            construction = cutset_min_selection(instance, self.tree, self.budget)
        return construction.tour, construction
