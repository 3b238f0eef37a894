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
Functionality to perform simple, generic tasks and operations.

The contents of this module are shared by every other module in the package: the
exception hierarchy, package-wide numerical defaults, and the conversions between the
1-based vertex labels used in all public interfaces and the 0-based indices used
internally.
"""

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from typing import Any, Literal, Optional

import numpy as np
from typing_extensions import TypeAlias

#: Whether a vertex sequence is read as a closed circuit or an open path.
Mode: TypeAlias = Literal["circuit", "path"]
MODES: tuple[str, ...] = ("circuit", "path")

#: Smallest vertex count of an instance.
MIN_VERTICES = 3
#: Default node/candidate limit for the combinatorial searches.
DEFAULT_BUDGET = 10**7
#: Absolute tolerance below which an amplitude or a length is treated as zero.
ZERO_TOLERANCE = 1e-9
#: Absolute tolerance for the symmetry check on weight matrices.
SYMMETRY_TOLERANCE = 1e-9
#: Largest vertex count accepted by the permutation oracle.
BRUTE_FORCE_LIMIT = 12
#: Largest vertex count accepted by the exhaustive relabelling scans.
RELABELING_LIMIT = 9
#: Largest qubit count for which amplitude vectors are materialised.
DENSE_QUBIT_LIMIT = 20


class TouraxError(Exception):
    """Base class for all errors raised by this package."""


class NotAPermutationError(TouraxError, ValueError):
    """Raise when a vertex sequence repeats or omits a vertex."""


class VertexIndexError(TouraxError, IndexError):
    """Raise when a vertex label lies outside ``1..p``."""


class InfeasibleSublistError(TouraxError, ValueError):
    """Raise when an edge sublist is not a Hamiltonian path or circuit."""


class SymmetryViolationError(TouraxError, ValueError):
    """Raise when a weight matrix is not symmetric within tolerance."""


class InstanceFormatError(TouraxError, ValueError):
    """Raise when an instance, graph or tree file cannot be parsed."""


class TooLargeError(TouraxError, ValueError):
    """Raise when an exhaustive method is asked to run beyond its size guard."""


class NoCoordinatesError(TouraxError, ValueError):
    """Raise when a geometric method is applied to an instance without coordinates."""


class ZeroLengthSegmentError(TouraxError, ValueError):
    """Raise when two consecutive tour points coincide."""


class NotASpanningTreeError(TouraxError, ValueError):
    """Raise when a branch set is not a spanning tree of its host graph."""


class DisconnectedGraphError(TouraxError, ValueError):
    """Raise when a graph that must be connected is not."""


class TourInstanceMismatchError(TouraxError, ValueError):
    """Raise when a tour does not belong to the instance it is graded against."""


class DimensionMismatchError(TouraxError, ValueError):
    """Raise when two amplitude states (or a state and an oracle) differ in size."""


class TargetAbsentError(TouraxError, LookupError):
    """Raise when a search target is not a member of the searched bag."""


class BadPrefixError(TouraxError, ValueError):
    """Raise when a bit prefix is longer than the register or not binary."""


class GreedyStuckError(TouraxError, RuntimeError):
    """Raise when no chord column extends the cutset construction feasibly."""


class BudgetExhaustedError(TouraxError, RuntimeError):
    """
    Raise when a search stops at its node or candidate limit.

    :param message: Human readable description
    :param explored: Number of nodes or candidates examined before stopping
    :param report: Optional partial result carried for diagnostics
    """

    def __init__(self, message: str, explored: int, report: Any = None):
        """Initialise the error with the exploration count."""
        super().__init__(message)
        self.explored = explored
        self.report = report


class DegenerateCenterWarning(UserWarning):
    """Warn when sweep points coincide with the centre of mass."""


def check_mode(mode: str) -> Mode:
    """
    Validate a circuit/path mode string.

    :param mode: Candidate mode
    :return: The mode, unchanged
    """
    if mode not in MODES:
        raise ValueError(f"'mode' must be one of {MODES}, got {mode!r}")
    return mode  # pyright: ignore[reportReturnType]


def check_budget(budget: int) -> int:
    """Check that 'budget' is a positive integer and return it."""
    budget = int(budget)
    if budget <= 0:
        raise ValueError("'budget' must be a positive integer")
    return budget


def to_indices(order: Iterable[int], p: int) -> np.ndarray:
    """
    Convert a 1-based permutation of ``1..p`` into a 0-based index array.

    :param order: Vertex sequence with 1-based labels
    :param p: Vertex count
    :return: Integer array of 0-based indices
    """
    indices = np.asarray(list(order), dtype=np.int64) - 1
    if indices.shape != (p,) or not np.array_equal(np.sort(indices), np.arange(p)):
        raise NotAPermutationError(
            f"'order' must contain each vertex of 1..{p} exactly once"
        )
    return indices


def check_vertex(vertex: int, p: int) -> int:
    """Return the 0-based index of 1-based 'vertex', checking it lies in ``1..p``."""
    if not 1 <= vertex <= p:
        raise VertexIndexError(f"vertex {vertex} outside 1..{p}")
    return vertex - 1


def canonical_circuit(order: Sequence[int]) -> tuple[int, ...]:
    """
    Rotate and orient a circuit into canonical form.

    The canonical form starts at the smallest label and then steps to whichever of its
    two neighbours has the smaller label.

    :param order: Vertex sequence read cyclically
    :return: The canonical vertex tuple
    """
    order = [int(v) for v in order]
    start = order.index(min(order))
    rotated = order[start:] + order[:start]
    if len(rotated) >= MIN_VERTICES and rotated[1] > rotated[-1]:
        rotated = rotated[:1] + rotated[:0:-1]
    return tuple(rotated)


def canonical_path(order: Sequence[int]) -> tuple[int, ...]:
    """Orient an open path so that its smaller endpoint comes first."""
    order = tuple(int(v) for v in order)
    return order[::-1] if order[0] > order[-1] else order


def canonical_circuits(p: int) -> Iterator[tuple[int, ...]]:
    """
    Yield every Hamiltonian circuit on ``1..p`` once, in canonical form.

    Circuits are produced in lexicographic order.
    """
    for tail in itertools.permutations(range(2, p + 1)):
        if tail[0] < tail[-1]:
            yield (1, *tail)


def canonical_paths(p: int) -> Iterator[tuple[int, ...]]:
    """Yield every Hamiltonian path on ``1..p`` once, smaller endpoint first."""
    for order in itertools.permutations(range(1, p + 1)):
        if order[0] < order[-1]:
            yield order


def count_canonical(p: int, mode: Mode) -> int:
    """Return the number of canonical circuits or paths on ``p`` vertices."""
    return math.factorial(p - 1) // 2 if mode == "circuit" else math.factorial(p) // 2


def batched(
    iterable: Iterable[tuple[int, ...]], size: int
) -> Iterator[np.ndarray]:
    """
    Group vertex tuples into integer arrays of at most 'size' rows.

    :param iterable: Tuples of equal length
    :param size: Maximum rows per batch
    :return: Iterator of ``(rows, length)`` integer arrays
    """
    iterator = iter(iterable)
    while True:
        block = list(itertools.islice(iterator, size))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def format_order(order: Optional[Sequence[int]], separator: str = ",") -> str:
    """Render a vertex sequence for reports."""
    if order is None:
        return "-"
    return separator.join(str(v) for v in order)
