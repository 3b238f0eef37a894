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
Weighted complete graph instances.

An :class:`Instance` holds a symmetric :math:`p \times p` weight matrix with zero
diagonal and, for planar instances, the :math:`p` points the weights were measured
between. Vertices are labelled :math:`1, \dots, p` in every public function; arrays are
indexed from zero.

Relabelling an instance permutes rows and columns together. The transposition
:func:`apply_transposition` is the elementary relabelling used by the transposition
heuristics, and :func:`triangular_sum` is the quantity those relabellings are judged
by.
"""

from collections.abc import Sequence
from typing import Literal, Optional, Union

import equinox as eqx
import jax.numpy as jnp
import jax.random as jr
import numpy as np
from jaxtyping import Array, ArrayLike, Float, Shaped

from tourax.util import (
    MIN_VERTICES,
    SYMMETRY_TOLERANCE,
    SymmetryViolationError,
    check_vertex,
    to_indices,
)

#: Decimal places kept when Euclidean distances are turned into weights.
EUCLIDEAN_DECIMALS = 6

InstanceKind = Literal["uniform", "euclidean", "convex"]
INSTANCE_KINDS: tuple[str, ...] = ("uniform", "euclidean", "convex")


def _as_weights(weights: ArrayLike) -> Float[Array, "p p"]:
    return jnp.asarray(weights, dtype=jnp.float64)


def _as_coords(coords: Optional[ArrayLike]) -> Optional[Float[Array, "p 2"]]:
    if coords is None:
        return None
    return jnp.asarray(coords, dtype=jnp.float64)


def euclidean_weights(coords: Shaped[ArrayLike, "p 2"]) -> Float[Array, "p p"]:
    """
    Compute pairwise Euclidean distances rounded to six decimal places.

    :param coords: Planar points, one row per vertex
    :return: Symmetric distance matrix with zero diagonal
    """
    coords = jnp.asarray(coords, dtype=jnp.float64)
    differences = coords[:, None, :] - coords[None, :, :]
    distances = jnp.sqrt(jnp.sum(differences**2, axis=-1))
    return jnp.round(distances, EUCLIDEAN_DECIMALS)


class Instance(eqx.Module):
    """
    Symmetric travelling salesman instance on a complete graph.

    :param weights: Symmetric :math:`p \\times p` matrix of nonnegative weights with
        zero diagonal
    :param coords: Optional :math:`p \\times 2` array of planar points
    :param name: Identifier used in reports
    """

    weights: Float[Array, "p p"] = eqx.field(converter=_as_weights)
    coords: Optional[Float[Array, "p 2"]] = eqx.field(
        default=None, converter=_as_coords
    )
    name: str = "instance"

    def __check_init__(self):
        """Check the matrix is a valid symmetric weight matrix."""
        if self.weights.ndim != 2 or self.weights.shape[0] != self.weights.shape[1]:
            raise ValueError("'weights' must be a square matrix")
        if self.weights.shape[0] < MIN_VERTICES:
            raise ValueError("'p' must be at least 3")
        if not bool(jnp.all(jnp.isfinite(self.weights))):
            raise ValueError("'weights' must be finite")
        if bool(jnp.any(self.weights < 0)):
            raise ValueError("'weights' must be nonnegative")
        if bool(jnp.any(jnp.diag(self.weights) != 0)):
            raise ValueError("'weights' must have a zero diagonal")
        if bool(jnp.any(jnp.abs(self.weights - self.weights.T) > SYMMETRY_TOLERANCE)):
            raise SymmetryViolationError("'weights' must be symmetric")
        if self.coords is not None and self.coords.shape != (self.p, 2):
            raise ValueError("'coords' must hold one planar point per vertex")

    @property
    def p(self) -> int:
        """Number of vertices."""
        return self.weights.shape[0]

    @property
    def is_euclidean(self) -> bool:
        """Whether the instance carries planar coordinates."""
        return self.coords is not None

    def weight(self, i: int, j: int) -> float:
        """Return the weight between 1-based vertices 'i' and 'j'."""
        return float(self.weights[check_vertex(i, self.p), check_vertex(j, self.p)])

    def total_weight(self) -> float:
        """Return the sum of all :math:`p(p-1)/2` edge weights."""
        return float(jnp.sum(jnp.triu(self.weights, k=1)))

    @classmethod
    def from_points(
        cls, coords: Shaped[ArrayLike, "p 2"], name: str = "instance"
    ) -> "Instance":
        """Build the Euclidean instance over 'coords'."""
        return cls(euclidean_weights(coords), coords, name)


def relabel(inst: Instance, permutation: Sequence[int]) -> Instance:
    """
    Relabel every vertex of an instance at once.

    New vertex ``i`` is old vertex ``permutation[i - 1]``, so the new weight matrix is
    the old one with rows and columns both taken in the order of 'permutation'.

    :param inst: Instance to relabel
    :param permutation: Permutation of ``1..p``
    :return: The relabelled instance
    """
    indices = jnp.asarray(to_indices(permutation, inst.p))
    coords = None if inst.coords is None else inst.coords[indices]
    return Instance(inst.weights[indices][:, indices], coords, inst.name)


def apply_transposition(inst: Instance, a: int, b: int) -> Instance:
    """
    Swap the labels of vertices 'a' and 'b'.

    Rows ``a`` and ``b`` are interchanged and then columns ``a`` and ``b``; points are
    swapped with them.

    :param inst: Instance to relabel
    :param a: First 1-based vertex
    :param b: Second 1-based vertex
    :return: The relabelled instance
    """
    i, j = check_vertex(a, inst.p), check_vertex(b, inst.p)
    if i == j:
        return inst
    permutation = list(range(1, inst.p + 1))
    permutation[i], permutation[j] = permutation[j], permutation[i]
    return relabel(inst, permutation)


def triangular_sum(inst: Instance) -> float:
    r"""
    Sum the strict upper triangle of the weight matrix, superdiagonal excluded.

    .. math::

        \sum_{i=1}^{p-2} \sum_{j=i+2}^{p} w_{ij}

    Since the superdiagonal holds the path :math:`1 \to 2 \to \dots \to p`, the
    triangular sum plus that path's weight is the total edge weight of the instance.
    """
    return float(jnp.sum(jnp.triu(inst.weights, k=2)))


def gen_random_instance(
    seed: int,
    p: int,
    kind: InstanceKind = "uniform",
    weight_range: Union[int, float] = 100,
) -> Instance:
    """
    Generate a reproducible random instance.

    ``uniform`` draws integer weights in ``[1, weight_range]``; ``euclidean`` draws
    ``p`` points uniformly in the square ``[0, weight_range]^2``; ``convex`` draws
    ``p`` points on the circle inscribed in that square, so they lie in convex
    position.

    :param seed: Integer seed for :func:`jax.random.key`
    :param p: Vertex count, at least three
    :param kind: Instance family
    :param weight_range: Weight bound or side length of the sampling square
    :return: The generated instance, named after its parameters
    """
    if p < MIN_VERTICES:
        raise ValueError("'p' must be at least 3")
    if weight_range <= 0:
        raise ValueError("'weight_range' must be positive")
    key = jr.key(seed)
    name = f"{kind}-p{p}-s{seed}"
    if kind == "uniform":
        draws = jr.randint(key, (p, p), 1, int(weight_range) + 1)
        upper = jnp.triu(draws, k=1)
        return Instance(upper + upper.T, None, name)
    if kind == "euclidean":
        points = jr.uniform(key, (p, 2), minval=0.0, maxval=weight_range)
        return Instance.from_points(points, name)
    if kind == "convex":
        angles = jnp.sort(jr.uniform(key, (p,), maxval=2 * jnp.pi))
        radius = weight_range / 2
        points = radius + radius * jnp.stack([jnp.cos(angles), jnp.sin(angles)], -1)
        # Sorted angles are hull order; shuffle so labels carry no geometry.
        points = jr.permutation(jr.fold_in(key, 1), points)
        return Instance.from_points(points, name)
    raise ValueError(f"'kind' must be uniform, euclidean or convex, got {kind!r}")


def gen_convex_instance(
    seed: int, p: int, weight_range: Union[int, float] = 100
) -> Instance:
    """
    Generate points in convex position on the circle inscribed in a square.

    :param seed: Integer seed for :func:`jax.random.key`
    :param p: Vertex count, at least three
    :param weight_range: Side length of the square
    :return: The generated instance, labels shuffled relative to hull order
    """
    return gen_random_instance(seed, p, "convex", weight_range)


def off_diagonal_weights(inst: Instance) -> np.ndarray:
    """Return the sorted multiset of upper-triangle weights."""
    rows, cols = np.triu_indices(inst.p, k=1)
    return np.sort(np.asarray(inst.weights)[rows, cols])
