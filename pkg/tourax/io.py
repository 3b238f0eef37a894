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
Plain-text formats for instances, graphs and spanning trees.

Instance files come in two flavours. A matrix file holds ``p`` on its first line
followed by ``p`` rows of ``p`` weights. A Euclidean file starts with the literal
``EUC2D``, then ``p``, then one ``x y`` line per vertex; weights are the rounded
distances between the points. Graph files start with ``GRAPH p q`` and list ``q`` edges
as ``i j [weight] [label]``; tree files list ``p - 1`` branches as ``i j``. In every
format, blank lines and lines starting with ``#`` are skipped.
"""

from collections.abc import Iterator
from pathlib import Path
from typing import Optional, Union

import numpy as np

from tourax.cutset import SimpleGraph, SpanningTree
from tourax.data import Instance
from tourax.util import InstanceFormatError, SymmetryViolationError

PathLike = Union[str, Path]

EUCLIDEAN_HEADER = "EUC2D"
GRAPH_HEADER = "GRAPH"
HEADER_TOKENS = 3
EDGE_TOKENS = 2


def _content_lines(path: PathLike) -> Iterator[tuple[int, list[str]]]:
    """Yield the line number and tokens of every non-comment, non-blank line."""
    with Path(path).open(encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                yield number, stripped.split()


def _number(token: str, number: int, kind: type = float) -> Union[int, float]:
    try:
        return kind(token)
    except ValueError as err:
        raise InstanceFormatError(
            f"line {number}: expected a number, got {token!r}"
        ) from err


def _edge(tokens: list[str], number: int) -> tuple[int, int]:
    return _number(tokens[0], number, int), _number(tokens[1], number, int)


def _format_number(value: float) -> str:
    """Render integral values without a decimal point and others exactly."""
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def _vertex_count(lines: list[tuple[int, list[str]]], position: int) -> int:
    if len(lines) <= position or len(lines[position][1]) != 1:
        raise InstanceFormatError("expected the vertex count on a line of its own")
    number, (token,) = lines[position]
    p = _number(token, number, int)
    if p < 1:
        raise InstanceFormatError(f"line {number}: vertex count must be positive")
    return p


def parse_instance(path: PathLike, name: Optional[str] = None) -> Instance:
    """
    Read an instance from a matrix or Euclidean file.

    :param path: File to read
    :param name: Instance name; the file stem when omitted
    :return: The parsed instance
    """
    lines = list(_content_lines(path))
    name = Path(path).stem if name is None else name
    if not lines:
        raise InstanceFormatError(f"{path}: file holds no instance")
    euclidean = lines[0][1] == [EUCLIDEAN_HEADER]
    if euclidean:
        p = _vertex_count(lines, 1)
        rows = lines[2:]
        width = 2
    else:
        p = _vertex_count(lines, 0)
        rows = lines[1:]
        width = p
    if len(rows) != p:
        raise InstanceFormatError(f"{path}: expected {p} data lines, got {len(rows)}")
    values = np.zeros((p, width))
    for index, (number, tokens) in enumerate(rows):
        if len(tokens) != width:
            raise InstanceFormatError(
                f"line {number}: expected {width} values, got {len(tokens)}"
            )
        values[index] = [_number(token, number) for token in tokens]
    try:
        if euclidean:
            return Instance.from_points(values, name)
        return Instance(values, None, name)
    except SymmetryViolationError:
        raise
    except ValueError as err:
        raise InstanceFormatError(f"{path}: {err}") from err


def write_instance(inst: Instance, path: PathLike) -> Path:
    """
    Write an instance so that :func:`parse_instance` reads it back unchanged.

    Instances with coordinates are written in the Euclidean format, others as a
    matrix.

    :param inst: Instance to write
    :param path: Destination file
    :return: The destination path
    """
    path = Path(path)
    if inst.coords is not None:
        lines = [EUCLIDEAN_HEADER, str(inst.p)]
        rows = np.asarray(inst.coords)
    else:
        lines = [str(inst.p)]
        rows = np.asarray(inst.weights)
    lines += [" ".join(_format_number(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def parse_graph(path: PathLike) -> SimpleGraph:
    """
    Read a graph file.

    Weights and labels are optional per file: either every edge line carries them or
    none does. A single extra token is read as a weight when it is numeric and as a
    label otherwise.

    :param path: File to read
    :return: The parsed graph
    """
    lines = list(_content_lines(path))
    if not lines or lines[0][1][0] != GRAPH_HEADER or len(lines[0][1]) != HEADER_TOKENS:
        raise InstanceFormatError(f"{path}: expected a 'GRAPH p q' header")
    number, (_, p_token, q_token) = lines[0]
    p, q = _number(p_token, number, int), _number(q_token, number, int)
    if len(lines) - 1 != q:
        raise InstanceFormatError(f"{path}: expected {q} edges, got {len(lines) - 1}")
    edges, weights, labels = [], [], []
    for number, tokens in lines[1:]:
        if not EDGE_TOKENS <= len(tokens) <= EDGE_TOKENS + 2:
            raise InstanceFormatError(
                f"line {number}: expected 'i j [weight] [label]'"
            )
        edges.append(_edge(tokens, number))
        extra = tokens[EDGE_TOKENS:]
        if extra:
            try:
                weights.append(float(extra[0]))
                extra = extra[1:]
            except ValueError:
                pass
        labels.extend(extra)
    if weights and len(weights) != q:
        raise InstanceFormatError(f"{path}: give a weight for every edge or none")
    if labels and len(labels) != q:
        raise InstanceFormatError(f"{path}: give a label for every edge or none")
    try:
        return SimpleGraph(p, edges, weights or None, labels or None)
    except (ValueError, IndexError) as err:
        raise InstanceFormatError(f"{path}: {err}") from err


def write_graph(g: SimpleGraph, path: PathLike) -> Path:
    """
    Write a graph so that :func:`parse_graph` reads it back unchanged.

    :param g: Graph to write
    :param path: Destination file
    :return: The destination path
    """
    path = Path(path)
    lines = [f"{GRAPH_HEADER} {g.p} {g.q}"]
    for index, (i, j) in enumerate(g.edges):
        tokens = [str(i), str(j)]
        if g.weights is not None:
            tokens.append(_format_number(g.weights[index]))
        if g.labels is not None:
            tokens.append(g.labels[index])
        lines.append(" ".join(tokens))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def parse_tree(path: PathLike) -> SpanningTree:
    """
    Read a spanning tree file of ``i j`` branch lines.

    :param path: File to read
    :return: The branches; they are matched against a host graph when used
    """
    branches = []
    for number, tokens in _content_lines(path):
        if len(tokens) != EDGE_TOKENS:
            raise InstanceFormatError(f"line {number}: expected 'i j'")
        branches.append(_edge(tokens, number))
    return SpanningTree(branches)
