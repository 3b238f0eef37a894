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


"""Tests for the solver registry and the seeded comparison batches."""

import csv
from contextlib import AbstractContextManager
from contextlib import nullcontext as does_not_raise
from pathlib import Path

import pytest

from tourax.cutset import CutsetSolver
from tourax.experiments import (
    ALGORITHM_MODES,
    ALGORITHMS,
    CSV_COLUMNS,
    BatchSpec,
    CompareRow,
    make_solver,
    run_compare,
    summarize,
    write_csv,
)
from tourax.solvers import BruteForce, NearestNeighbor, OWALExact


def _row(algo: str, weight: float, optimum: float, **kwargs) -> CompareRow:
    fields = {
        "p": 5,
        "seed": 0,
        "kind": "uniform",
        "algo": algo,
        "mode": "circuit",
        "weight": weight,
        "optimum": optimum,
        "gap_to_optimum": weight - optimum,
        "lower_bound": None,
        "gap_bound": None,
        "gap_bound_violated": None,
        "incident_gap_bound": None,
        "incident_gap_bound_violated": None,
        "candidates_checked": None,
    }
    fields.update(kwargs)
    return CompareRow(**fields)


class TestMakeSolver:
    """Tests for :func:`tourax.experiments.make_solver`."""

    @pytest.mark.parametrize("algo", ALGORITHMS)
    def test_every_algorithm(self, algo: str) -> None:
        """Check every registered algorithm builds in each of its modes."""
        for mode in ALGORITHM_MODES[algo]:
            assert make_solver(algo, mode) is not None

    def test_configuration(self) -> None:
        """Check options reach the configured solver."""
        assert make_solver("nn", start=3) == NearestNeighbor(3)
        assert make_solver("brute", "path") == BruteForce(mode="path")
        owal = make_solver("owal-exact", budget=50)
        assert isinstance(owal, OWALExact)
        assert owal.mode == "circuit"
        assert owal.budget == 50
        assert isinstance(make_solver("cutset"), CutsetSolver)

    @pytest.mark.parametrize(
        "algo, mode, match",
        [
            ("lkh", None, "'algo' must be one of"),
            ("nn", "path", "does not build a path"),
            ("tpv1", "circuit", "does not build a circuit"),
            ("brute", "cycle", "'mode' must be one of"),
        ],
        ids=["unknown_algo", "nn_path", "tpv1_circuit", "unknown_mode"],
    )
    def test_invalid(self, algo: str, mode, match: str) -> None:
        """Check unknown algorithms and unsupported modes are refused."""
        with pytest.raises(ValueError, match=match):
            make_solver(algo, mode)


class TestBatchSpec:
    """Tests for :class:`tourax.experiments.BatchSpec`."""

    @pytest.mark.parametrize(
        "kwargs, context",
        [
            ({}, does_not_raise()),
            ({"p_min": 3, "p_max": 3}, does_not_raise()),
            ({"p_min": 2}, pytest.raises(ValueError, match="'p_min' and 'p_max'")),
            (
                {"p_min": 6, "p_max": 5},
                pytest.raises(ValueError, match="'p_min' and 'p_max'"),
            ),
            ({"p_max": 13}, pytest.raises(ValueError, match="'p_min' and 'p_max'")),
            ({"seeds": 0}, pytest.raises(ValueError, match="'seeds' must be")),
            ({"kinds": ("grid",)}, pytest.raises(ValueError, match="'kinds'")),
            ({"algos": ("lkh",)}, pytest.raises(ValueError, match="'algos'")),
            ({"budget": 0}, pytest.raises(ValueError, match="'budget'")),
        ],
        ids=[
            "defaults",
            "triangles",
            "too_small",
            "reversed",
            "too_large",
            "no_seeds",
            "unknown_kind",
            "unknown_algo",
            "no_budget",
        ],
    )
    def test_check_init(self, kwargs: dict, context: AbstractContextManager) -> None:
        """Check the grid is validated on construction."""
        with context:
            BatchSpec(**kwargs)


class TestRunCompare:
    """Tests for :func:`tourax.experiments.run_compare`."""

    @pytest.fixture(scope="class")
    def rows(self) -> list[CompareRow]:
        """Rows of a small batch of exact and greedy solutions."""
        spec = BatchSpec(4, 5, 2, ("uniform",), ("owal-exact", "brute", "nn"))
        return run_compare(spec, progress=False)

    def test_grid(self, rows: list[CompareRow]) -> None:
        """Check one row per instance, algorithm and mode, in grid order."""
        assert len(rows) == 2 * 2 * 5
        assert [(row.p, row.seed) for row in rows[::5]] == [
            (4, 0),
            (4, 1),
            (5, 0),
            (5, 1),
        ]
        assert [(row.algo, row.mode) for row in rows[:5]] == [
            ("owal-exact", "circuit"),
            ("owal-exact", "path"),
            ("brute", "circuit"),
            ("brute", "path"),
            ("nn", "circuit"),
        ]

    def test_exact_agreement(self, rows: list[CompareRow]) -> None:
        """Check the exact methods reach the oracle optimum."""
        for row in rows:
            assert row.gap_to_optimum >= 0
            if row.algo in ("owal-exact", "brute"):
                assert row.weight == pytest.approx(row.optimum)
        assert summarize(rows).exact_agreement

    def test_bounds(self, rows: list[CompareRow]) -> None:
        """Check circuits carry bounds that hold and paths carry none."""
        for row in rows:
            if row.mode == "path":
                assert row.lower_bound is None
                assert row.gap_bound_violated is None
                assert row.incident_gap_bound_violated is None
            else:
                assert row.lower_bound <= row.optimum
                assert row.gap_bound == pytest.approx(row.weight - row.lower_bound)
                assert not row.gap_bound_violated
                assert 0 <= row.incident_gap_bound <= row.gap_bound
                slack = row.gap_to_optimum - row.incident_gap_bound
                assert row.incident_gap_bound_violated == (
                    slack > 1e-9 * max(1.0, row.optimum)
                )

    def test_sweep_skipped_without_coordinates(self) -> None:
        """Check the geometric method only runs on planar instances."""
        spec = BatchSpec(4, 4, 1, ("uniform", "euclidean"), ("sweep",))
        rows = run_compare(spec, progress=False)
        assert [row.kind for row in rows] == ["euclidean"]


class TestSummary:
    """Tests for :func:`tourax.experiments.summarize` and the CSV writer."""

    def test_summarize(self) -> None:
        """Check the violation rate, candidate spread and agreement flag."""
        incident_violated = {"incident_gap_bound_violated": True}
        rows = [
            _row("owal-exact", 10, 10, candidates_checked=3),
            _row("owal-exact", 12, 12, candidates_checked=7),
            _row("owal-exact", 9, 9, p=6, candidates_checked=4),
            _row("nn", 14, 10, gap_bound_violated=False, **incident_violated),
            _row("nn", 15, 12, gap_bound_violated=True, **incident_violated),
            _row("brute", 10, 10),
        ]
        summary = summarize(rows)
        assert summary.rows == 6
        assert summary.violation_rate == 0.5
        assert summary.incident_violation_rate == 1.0
        assert summary.candidates == {5: (3, 5.0, 7), 6: (4, 4.0, 4)}
        assert summary.exact_agreement

    def test_summarize_disagreement(self) -> None:
        """Check an exact method above the optimum is flagged."""
        summary = summarize([_row("brute", 11, 10)])
        assert not summary.exact_agreement
        assert summary.violation_rate == summary.incident_violation_rate == 0.0
        assert summary.candidates == {}

    def test_write_csv(self, tmp_path: Path) -> None:
        """Check the header and the rendering of integers, flags and blanks."""
        path = write_csv(
            [
                _row(
                    "nn",
                    14.0,
                    10.0,
                    lower_bound=8.5,
                    gap_bound_violated=False,
                    incident_gap_bound=2.0,
                    incident_gap_bound_violated=True,
                )
            ],
            tmp_path / "batch.csv",
        )
        with path.open(encoding="utf-8") as handle:
            header, line = list(csv.reader(handle))
        assert tuple(header) == CSV_COLUMNS
        assert line == [
            "5",
            "0",
            "uniform",
            "nn",
            "circuit",
            "14",
            "10",
            "4",
            "8.5",
            "",
            "false",
            "2",
            "true",
            "",
        ]
