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

"""Tests for tours, edge sublists and the ordered weighted adjacency list."""

import itertools
from contextlib import AbstractContextManager
from contextlib import nullcontext as does_not_raise

import numpy as np
import pytest

from tests.unit.conftest import unit_instance
from tourax.data import Instance, gen_random_instance, off_diagonal_weights
from tourax.tour import (
    EdgeSubList,
    HamPath,
    Tour,
    build_owal,
    check_solution,
    make_solution,
    sublist_to_order,
    tour_weight,
    validate_sublist,
)
from tourax.util import (
    InfeasibleSublistError,
    NotAPermutationError,
    TourInstanceMismatchError,
    canonical_circuits,
    canonical_paths,
)

FIVE_PATH_EDGES = [(1, 2), (1, 5), (2, 4), (3, 5)]


class TestTourWeight:
    """Tests for :func:`tourax.tour.tour_weight` and solution construction."""

    @pytest.mark.parametrize(
        "order, mode, expected",
        [
            ((1, 2, 3, 4, 6, 5), "circuit", 13),
            ((1, 6, 4, 2, 3, 5), "circuit", 12),
            ((1, 6, 5, 2, 3, 4), "circuit", 14),
            ((1, 2, 3, 4, 5, 6), "path", 13),
        ],
        ids=["cutset_tour", "optimum", "gap_tour", "path"],
    )
    def test_k6(
        self, k6: Instance, order: tuple[int, ...], mode: str, expected: float
    ) -> None:
        """Check weights along circuits and paths of the six-vertex instance."""
        assert tour_weight(k6, order, mode) == expected

    @pytest.mark.parametrize("kind", ["uniform", "euclidean"])
    @pytest.mark.parametrize("seed", range(3))
    def test_circuit_closes_path(self, kind: str, seed: int) -> None:
        """Check every circuit weighs its path plus the closing edge."""
        inst = gen_random_instance(seed, 6, kind)
        for order in itertools.permutations(range(1, 7)):
            closing = inst.weight(order[-1], order[0])
            assert tour_weight(inst, order) == pytest.approx(
                tour_weight(inst, order, "path") + closing
            )

    def test_five(self, five: Instance) -> None:
        """Check circuit and path weights agree with the closing edge."""
        assert tour_weight(five, (1, 2, 3, 4, 5), "path") == 26
        assert tour_weight(five, (1, 2, 3, 4, 5)) == 30
        assert tour_weight(five, (3, 5, 1, 2, 4), "path") == 17

    def test_unit_triangle(self) -> None:
        """Check the smallest instance."""
        assert tour_weight(unit_instance(3), (2, 3, 1)) == 3

    def test_rejects_bad_order(self, five: Instance) -> None:
        """Check orders must be permutations of the instance's vertices."""
        with pytest.raises(NotAPermutationError):
            tour_weight(five, (1, 2, 3, 4))
        with pytest.raises(ValueError, match="'mode' must be one of"):
            tour_weight(five, (1, 2, 3, 4, 5), "cycle")

    def test_make_solution(self, five: Instance) -> None:
        """Check solutions are canonicalised and weighed."""
        path = make_solution(five, (4, 2, 1, 5, 3), "path")
        assert isinstance(path, HamPath)
        assert (path.order, path.weight) == ((3, 5, 1, 2, 4), 17)
        tour = make_solution(five, (5, 3, 4, 2, 1), "circuit")
        assert isinstance(tour, Tour)
        assert (tour.order, tour.weight) == ((1, 2, 4, 3, 5), 26)

    def test_edges(self) -> None:
        """Check circuits include their closing edge and paths do not."""
        assert Tour((1, 3, 2), 3).edges() == ((1, 3), (2, 3), (1, 2))
        assert HamPath((3, 1, 2), 2).edges() == ((1, 3), (1, 2))

    def test_tour_check_init(self) -> None:
        """Check tours must visit each vertex once."""
        with pytest.raises(NotAPermutationError):
            Tour((1, 1, 2), 0)

    @pytest.mark.parametrize(
        "solution, context",
        [
            (HamPath((3, 5, 1, 2, 4), 17), does_not_raise()),
            (
                Tour((1, 2, 3), 3),
                pytest.raises(TourInstanceMismatchError, match="visits 3 vertices"),
            ),
            (
                HamPath((3, 5, 1, 2, 4), 18),
                pytest.raises(TourInstanceMismatchError, match="does not match"),
            ),
        ],
        ids=["valid", "wrong_size", "wrong_weight"],
    )
    def test_check_solution(
        self, five: Instance, solution, context: AbstractContextManager
    ) -> None:
        """Check solutions are graded against the instance they claim."""
        with context:
            check_solution(five, solution)


class TestOWAL:
    """Tests for :func:`tourax.tour.build_owal`."""

    def test_order(self, five: Instance) -> None:
        """Check entries are sorted by weight and then by vertex pair."""
        entries = build_owal(five).entries
        assert len(entries) == 10
        assert entries[0] == (1, (1, 2))
        assert entries[-1] == (9, (3, 4))
        assert entries[3:5] == [(6, (1, 3)), (6, (2, 5))]
        assert entries[6:9] == [(8, (1, 4)), (8, (2, 3)), (8, (4, 5))]

    def test_k6(self, k6: Instance) -> None:
        """Check the lightest edges of the six-vertex instance."""
        owal = build_owal(k6)
        assert len(owal) == 15
        assert [edge for weight, edge in owal.entries if weight == 1] == [
            (1, 5),
            (1, 6),
            (2, 3),
        ]

    @pytest.mark.parametrize("kind", ["uniform", "euclidean"])
    @pytest.mark.parametrize("p", [3, 5, 8])
    def test_weight_multiset(self, kind: str, p: int) -> None:
        """Check the list holds each off-diagonal weight once, sorted."""
        inst = gen_random_instance(p, p, kind)
        owal = build_owal(inst)
        np.testing.assert_array_equal(owal.weights, off_diagonal_weights(inst))
        edges = sorted(edge for _, edge in owal.entries)
        assert edges == list(itertools.combinations(range(1, p + 1), 2))
        for weight, (i, j) in owal.entries:
            assert weight == inst.weight(i, j)


class TestEdgeSubList:
    """Tests for edge sublists and the Hamiltonian checks."""

    @pytest.mark.parametrize(
        "edges, context",
        [
            ([(2, 1), (3, 4)], does_not_raise()),
            ([(1, 1)], pytest.raises(ValueError, match="loops")),
            ([(0, 2)], pytest.raises(ValueError, match="1-based")),
            ([(1, 2), (2, 1)], pytest.raises(ValueError, match="repeat")),
        ],
        ids=["valid", "loop", "zero_label", "repeat"],
    )
    def test_check_init(self, edges: list, context: AbstractContextManager) -> None:
        """Check malformed edge sets are rejected."""
        with context:
            assert len(EdgeSubList(edges)) == len(edges)

    def test_from_edges(self, five: Instance) -> None:
        """Check sublists are normalised and weighed."""
        sublist = EdgeSubList.from_edges(five, [(2, 1), (5, 3)])
        assert sublist.edges == ((1, 2), (3, 5))
        assert sublist.weight == 8

    @pytest.mark.parametrize(
        "edges, mode, expected",
        [
            (FIVE_PATH_EDGES, "path", True),
            ([*FIVE_PATH_EDGES, (3, 4)], "circuit", True),
            (FIVE_PATH_EDGES, "circuit", False),
            ([(1, 2), (1, 5), (2, 4), (1, 3)], "path", False),
            ([(1, 2), (1, 5), (2, 4), (4, 5)], "path", False),
            ([(1, 2), (2, 3), (3, 4), (4, 6)], "path", False),
            ([(1, 2), (1, 2), (2, 4), (3, 5)], "path", False),
        ],
        ids=[
            "path",
            "circuit",
            "path_as_circuit",
            "degree_three",
            "cycle_and_isolated",
            "label_out_of_range",
            "repeated",
        ],
    )
    def test_validate_sublist(
        self, five: Instance, edges: list, mode: str, expected: bool
    ) -> None:
        """Check the degree and connectivity tests on five vertices."""
        assert validate_sublist(five, edges, mode) is expected

    @pytest.mark.parametrize(
        "mode, size, expected",
        [("circuit", 5, 12), ("path", 4, 60)],
        ids=["circuits", "paths"],
    )
    def test_complete_graph_on_five(self, mode: str, size: int, expected: int) -> None:
        """Check every edge subset of the complete graph on five vertices."""
        inst = unit_instance(5)
        pairs = list(itertools.combinations(range(1, 6), 2))
        accepted = {
            frozenset(edges)
            for edges in itertools.combinations(pairs, size)
            if validate_sublist(inst, edges, mode)
        }
        scan = canonical_circuits if mode == "circuit" else canonical_paths
        solutions = {
            frozenset(make_solution(inst, order, mode).edges()) for order in scan(5)
        }
        assert len(accepted) == expected
        assert accepted == solutions

    def test_validate_disconnected_circuit(self) -> None:
        """Check two disjoint triangles are not a Hamiltonian circuit."""
        edges = [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]
        assert not validate_sublist(unit_instance(6), edges, "circuit")

    def test_sublist_to_order(self) -> None:
        """Check accepted sublists walk into canonical orders."""
        assert sublist_to_order(FIVE_PATH_EDGES, "path") == (3, 5, 1, 2, 4)
        circuit = EdgeSubList([*FIVE_PATH_EDGES, (3, 4)])
        assert sublist_to_order(circuit, "circuit") == (1, 2, 4, 3, 5)
        with pytest.raises(InfeasibleSublistError, match="Hamiltonian circuit"):
            sublist_to_order(FIVE_PATH_EDGES, "circuit")
