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

"""Tests for reading and writing instance, graph and tree files."""

from pathlib import Path

import numpy as np
import pytest

from tests.unit.conftest import K6_TREE, square_instance
from tourax.cutset import SimpleGraph
from tourax.data import Instance
from tourax.io import (
    parse_graph,
    parse_instance,
    parse_tree,
    write_graph,
    write_instance,
)
from tourax.util import InstanceFormatError, SymmetryViolationError


class TestInstanceFiles:
    """Tests for matrix and Euclidean instance files."""

    def test_matrix_round_trip(self, tmp_path: Path, five: Instance) -> None:
        """Check a written matrix file parses back to the same instance."""
        path = write_instance(five, tmp_path / "five.txt")
        assert path.read_text(encoding="utf-8").splitlines()[:2] == ["5", "0 1 6 8 4"]
        parsed = parse_instance(path)
        np.testing.assert_array_equal(parsed.weights, five.weights)
        assert parsed.name == "five"
        assert not parsed.is_euclidean

    def test_euclidean_round_trip(self, tmp_path: Path) -> None:
        """Check coordinates survive a round trip."""
        square = square_instance()
        parsed = parse_instance(write_instance(square, tmp_path / "sq.txt"), "sq")
        np.testing.assert_array_equal(parsed.coords, square.coords)
        np.testing.assert_array_equal(parsed.weights, square.weights)
        assert parsed.name == "sq"

    def test_comments_and_blank_lines(self, tmp_path: Path) -> None:
        """Check comments and blank lines are skipped anywhere."""
        path = tmp_path / "points.txt"
        path.write_text(
            "# three points\nEUC2D\n\n3\n0 0\n# middle\n3 4\n6 0\n", encoding="utf-8"
        )
        inst = parse_instance(path)
        assert inst.weight(1, 2) == 5
        assert inst.weight(1, 3) == 6

    @pytest.mark.parametrize(
        "content, match",
        [
            ("", "holds no instance"),
            ("3\n0 1 2\n1 0 3\n", "expected 3 data lines"),
            ("3\n0 1 2\n1 0 3\n2 3\n", "expected 3 values"),
            ("3\n0 1 x\n1 0 3\n2 3 0\n", "expected a number"),
            ("3 3\n0 1 2\n1 0 3\n2 3 0\n", "vertex count"),
            ("3\n0 -1 2\n-1 0 3\n2 3 0\n", "nonnegative"),
            ("EUC2D\n2\n0 0\n1 1\n", "at least 3"),
        ],
        ids=[
            "empty",
            "missing_row",
            "short_row",
            "not_a_number",
            "bad_count",
            "negative",
            "too_few_points",
        ],
    )
    def test_format_errors(self, tmp_path: Path, content: str, match: str) -> None:
        """Check malformed files raise a format error naming the problem."""
        path = tmp_path / "bad.txt"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(InstanceFormatError, match=match):
            parse_instance(path)

    def test_asymmetric(self, tmp_path: Path) -> None:
        """Check asymmetric matrices keep their own error type."""
        path = tmp_path / "asym.txt"
        path.write_text("3\n0 1 2\n1 0 3\n2 4 0\n", encoding="utf-8")
        with pytest.raises(SymmetryViolationError):
            parse_instance(path)


class TestGraphFiles:
    """Tests for graph and spanning tree files."""

    def test_labelled_round_trip(
        self, tmp_path: Path, labelled_graph: SimpleGraph
    ) -> None:
        """Check parallel labelled edges survive a round trip."""
        parsed = parse_graph(write_graph(labelled_graph, tmp_path / "g.txt"))
        assert parsed.p == 8
        assert parsed.edges == labelled_graph.edges
        assert parsed.labels == labelled_graph.labels
        assert parsed.weights is None

    def test_weighted(self, tmp_path: Path) -> None:
        """Check numeric extra tokens are read as weights."""
        path = tmp_path / "w.txt"
        path.write_text("GRAPH 3 3\n1 2 1.5 x\n2 3 2 y\n# chord\n1 3 4 z\n")
        graph = parse_graph(path)
        assert graph.weights == (1.5, 2.0, 4.0)
        assert graph.edge_labels == ("x", "y", "z")

    @pytest.mark.parametrize(
        "content, match",
        [
            ("3 2\n1 2\n2 3\n", "GRAPH p q"),
            ("GRAPH 3 2\n1 2\n", "expected 2 edges"),
            ("GRAPH 3 2\n1 2 5\n2 3\n", "weight for every edge"),
            ("GRAPH 3 2\n1 2 a\n2 3\n", "label for every edge"),
            ("GRAPH 3 2\n1 2\n2 1\n", "parallel edges"),
            ("GRAPH 3 1\n1 1 2 a b\n", "i j \\[weight\\] \\[label\\]"),
        ],
        ids=[
            "no_header",
            "missing_edge",
            "partial_weights",
            "partial_labels",
            "unlabelled_parallel",
            "too_many_tokens",
        ],
    )
    def test_graph_format_errors(
        self, tmp_path: Path, content: str, match: str
    ) -> None:
        """Check malformed graph files are rejected."""
        path = tmp_path / "bad.txt"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(InstanceFormatError, match=match):
            parse_graph(path)

    def test_tree(self, tmp_path: Path) -> None:
        """Check tree files list branches, normalised with the smaller end first."""
        path = tmp_path / "tree.txt"
        path.write_text("# k6\n2 1\n1 3\n5 1\n4 5\n5 6\n", encoding="utf-8")
        assert parse_tree(path).branches == tuple(K6_TREE)
        path.write_text("1 2 3\n", encoding="utf-8")
        with pytest.raises(InstanceFormatError, match="expected 'i j'"):
            parse_tree(path)
