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

"""Fixtures used across multiple unit tests modules."""

import jax.numpy as jnp
import pytest

from tourax.cutset import SimpleGraph, SpanningTree
from tourax.data import Instance

K6_WEIGHTS = [
    [0, 2, 3, 4, 1, 1],
    [2, 0, 1, 3, 2, 3],
    [3, 1, 0, 4, 3, 4],
    [4, 3, 4, 0, 4, 3],
    [1, 2, 3, 4, 0, 2],
    [1, 3, 4, 3, 2, 0],
]
K6_TREE = [(1, 2), (1, 3), (1, 5), (4, 5), (5, 6)]

FIVE_WEIGHTS = [
    [0, 1, 6, 8, 4],
    [1, 0, 8, 5, 6],
    [6, 8, 0, 9, 7],
    [8, 5, 9, 0, 8],
    [4, 6, 7, 8, 0],
]

FIVE_SPREAD_WEIGHTS = [
    [0, 11, 2, 5, 3],
    [11, 0, 1, 6, 3],
    [2, 1, 0, 12, 4],
    [5, 6, 12, 0, 8],
    [3, 3, 4, 8, 0],
]

#: Eight vertices, tree edges ``a`` to ``g`` first; chord ``k`` is parallel to ``f``.
LABELLED_EDGES = {
    "a": (1, 2),
    "b": (2, 3),
    "c": (3, 4),
    "d": (4, 7),
    "e": (6, 7),
    "f": (4, 5),
    "g": (7, 8),
    "h": (1, 4),
    "i": (3, 8),
    "j": (1, 8),
    "k": (4, 5),
    "l": (5, 6),
}
TREE_LABELS = "abcdefg"


@pytest.fixture(name="k6")
def fixture_k6() -> Instance:
    """Return the six-vertex instance with weights one to four."""
    return Instance(K6_WEIGHTS, name="k6")


@pytest.fixture(name="k6_tree")
def fixture_k6_tree() -> SpanningTree:
    """Return the spanning tree used with the six-vertex instance."""
    return SpanningTree(K6_TREE)


@pytest.fixture(name="five")
def fixture_five() -> Instance:
    """Return the five-vertex instance with optimal path weight 17."""
    return Instance(FIVE_WEIGHTS, name="five")


@pytest.fixture(name="five_spread")
def fixture_five_spread() -> Instance:
    """Return the five-vertex instance whose heaviest edge weighs 12."""
    return Instance(FIVE_SPREAD_WEIGHTS, name="five-spread")


@pytest.fixture(name="labelled_graph")
def fixture_labelled_graph() -> SimpleGraph:
    """Return the eight-vertex graph with edges named ``a`` to ``l``."""
    return SimpleGraph(8, LABELLED_EDGES.values(), labels=LABELLED_EDGES.keys())


@pytest.fixture(name="labelled_tree")
def fixture_labelled_tree() -> SpanningTree:
    """Return the spanning tree made of edges ``a`` to ``g``."""
    return SpanningTree([LABELLED_EDGES[label] for label in TREE_LABELS])


def unit_instance(p: int) -> Instance:
    """Return the complete graph on 'p' vertices with every weight one."""
    return Instance(jnp.ones((p, p)) - jnp.eye(p), name=f"unit-{p}")


def square_instance() -> Instance:
    """Return the corners of the unit square, labelled anticlockwise."""
    return Instance.from_points([[0, 0], [1, 0], [1, 1], [0, 1]], "square")
