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

"""Tests for sorted weight arrays, the lower bound and the gap bound."""

import logging

import pytest

from tests.unit.conftest import unit_instance
from tourax.bounds import (
    RowCharge,
    build_swa,
    first_array_certificate,
    first_array_lower_bound,
    first_array_subgraph,
    gap_bound,
    gap_bound_violated,
    row_charges,
)
from tourax.data import Instance, gen_random_instance
from tourax.solvers.heuristics import nearest_neighbor
from tourax.tour import Tour
from tourax.util import TourInstanceMismatchError

#: Four vertices whose first-array edges close a circuit heavier than the bound.
LOOSE_CERTIFICATE_WEIGHTS = [
    [0, 1, 10, 1],
    [1, 0, 2, 10],
    [10, 2, 0, 2],
    [1, 10, 2, 0],
]


class TestSortedWeightArrays:
    """Tests for :func:`tourax.bounds.build_swa`."""

    def test_k6_arrays(self, k6: Instance) -> None:
        """Check rows are grouped by weight, neighbours in increasing order."""
        swa = build_swa(k6)
        assert swa.p == 6
        assert swa.first_array(1) == (5, 6)
        assert swa.first_array(4) == (2, 6)
        assert swa.arrays[1] == ((3,), (1, 5), (4, 6))
        assert swa.levels[1] == (1, 2, 3)
        assert [swa.row_minimum(v) for v in range(1, 7)] == [1, 1, 1, 3, 1, 1]

    def test_k6_lower_bound(self, k6: Instance) -> None:
        """Check the first-array bound sums the row minima."""
        assert first_array_lower_bound(build_swa(k6)) == 8

    def test_first_array_subgraph(self, k6: Instance) -> None:
        """Check the subgraph holds every row's cheapest edges once."""
        subgraph = first_array_subgraph(build_swa(k6))
        assert subgraph.edges == ((1, 5), (1, 6), (2, 3), (2, 4), (4, 6))
        assert subgraph.weights == (1, 1, 1, 3, 3)

    @pytest.mark.parametrize("p", [3, 5, 8], ids=lambda p: f"p{p}")
    def test_unit(self, p: int) -> None:
        """Check every edge lies in the single array of a constant instance."""
        swa = build_swa(unit_instance(p))
        assert all(len(arrays) == 1 for arrays in swa.arrays)
        assert first_array_lower_bound(swa) == p


class TestGapBound:
    """Tests for the per-row charges of a tour."""

    def test_k6_charges(self, k6: Instance) -> None:
        """Check each vertex is charged the edge to its successor."""
        tour = Tour((1, 6, 5, 2, 3, 4), 14)
        charges = row_charges(build_swa(k6), tour)
        assert charges[0] == RowCharge(1, 6, 0)
        assert [charge.excess for charge in charges] == [0, 1, 1, 0, 3, 1]
        assert gap_bound(build_swa(k6), tour) == 6

    def test_k6_incident_charges(self, k6: Instance) -> None:
        """Check each vertex is charged its cheaper tour edge, successor on ties."""
        tour = Tour((1, 6, 5, 2, 3, 4), 14)
        charges = row_charges(build_swa(k6), tour, "incident")
        assert [(charge.vertex, charge.neighbour) for charge in charges] == [
            (1, 6),
            (6, 1),
            (5, 2),
            (2, 3),
            (3, 2),
            (4, 1),
        ]
        assert [charge.excess for charge in charges] == [0, 0, 1, 0, 0, 1]
        assert gap_bound(build_swa(k6), tour, "incident") == 2

    @pytest.mark.parametrize("seed", range(5))
    def test_incident_never_larger(self, seed: int) -> None:
        """Check incident charging never exceeds successor charging."""
        inst = gen_random_instance(seed, 7, "uniform", 20)
        swa = build_swa(inst)
        tour = nearest_neighbor(inst)
        incident = gap_bound(swa, tour, "incident")
        assert 0 <= incident <= gap_bound(swa, tour)

    def test_incident_violation(
        self, k6: Instance, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Check an expensive uncharged edge lets the incident bound fail."""
        swa = build_swa(k6)
        tour = Tour((1, 4, 2, 3, 6, 5), 15)
        assert gap_bound(swa, tour, "incident") == 1
        with caplog.at_level(logging.WARNING):
            assert not gap_bound_violated(swa, tour, 12)
            assert not caplog.records
            assert gap_bound_violated(swa, tour, 12, "incident")
        assert "Incident gap bound" in caplog.text

    def test_unknown_charging(self, k6: Instance) -> None:
        """Check charging rules are validated."""
        with pytest.raises(ValueError, match="'charging' must be one of"):
            gap_bound(build_swa(k6), Tour((1, 6, 5, 2, 3, 4), 14), "cheapest")

    def test_gap_matches_lower_bound(self, k6: Instance) -> None:
        """Check the bound is the tour weight less the lower bound."""
        swa = build_swa(k6)
        for order, weight in [((1, 2, 3, 4, 6, 5), 13), ((1, 5, 3, 2, 4, 6), 12)]:
            tour = Tour(order, weight)
            assert gap_bound(swa, tour) == weight - first_array_lower_bound(swa)

    def test_not_violated(self, k6: Instance, caplog: pytest.LogCaptureFixture) -> None:
        """Check the bound holds against the optimum and nothing is logged."""
        with caplog.at_level(logging.WARNING):
            tour = Tour((1, 6, 5, 2, 3, 4), 14)
            assert not gap_bound_violated(build_swa(k6), tour, 12)
        assert not caplog.records

    def test_violation_logged(
        self, k6: Instance, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Check a claimed optimum far below the bound is reported."""
        with caplog.at_level(logging.WARNING):
            assert gap_bound_violated(build_swa(k6), Tour((1, 6, 5, 2, 3, 4), 14), 7)
        assert "Successor gap bound" in caplog.text

    def test_mismatch(self, k6: Instance) -> None:
        """Check tours from another instance are refused."""
        with pytest.raises(TourInstanceMismatchError):
            row_charges(build_swa(k6), Tour((1, 2, 3, 4, 5), 10))


class TestCertificate:
    """Tests for :func:`tourax.bounds.first_array_certificate`."""

    def test_k6_none(self, k6: Instance) -> None:
        """Check the first-array edges of the six-vertex instance form a path only."""
        certificate = first_array_certificate(k6)
        assert certificate.tour is None
        assert certificate.lower_bound == 8
        assert not certificate.exact

    def test_circuit_above_bound(self) -> None:
        """Check a first-array circuit is only exact when it meets the bound."""
        certificate = first_array_certificate(Instance(LOOSE_CERTIFICATE_WEIGHTS))
        assert certificate.tour == Tour((1, 2, 3, 4), 6)
        assert certificate.lower_bound == 5
        assert not certificate.exact

    @pytest.mark.parametrize("p", [4, 6], ids=lambda p: f"p{p}")
    def test_unit_exact(self, p: int) -> None:
        """Check a circuit meeting the bound is certified."""
        certificate = first_array_certificate(unit_instance(p))
        assert certificate.tour is not None
        assert certificate.tour.weight == p
        assert certificate.exact
