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
Target search over an unsorted bag, classically and on simulated amplitude states.

The classical search halves a bag repeatedly and keeps whichever half the target lies
in, testing membership with the inner product of two indicator vectors.

The simulated searches work on real amplitude vectors over the :math:`N = 2^n` basis
states of an :math:`n`-qubit register. A :class:`SearchOracle` marks the target
:math:`t`. Three searches are available:

#.  :func:`qsearch_bitwise` fixes the target one bit at a time, testing which of the
    two uniform states over the extended prefixes overlaps the target.
#.  :func:`qsearch_one_step` applies :math:`T_{n-1} = M_{n-1} O` once to the uniform
    state, where :math:`O` flips the sign of the target amplitude and
    :math:`M_k = 2^k |\Psi\rangle\langle\Psi| - (2^k - 1) I`. The result is a multiple
    of :math:`|t\rangle`.
#.  :func:`qsearch_nonunitary` applies :math:`A = \frac{\sqrt{N}}{2} (I - O)` to the
    uniform state, which gives :math:`|t\rangle` exactly.

Neither :math:`M_k` for :math:`k \ge 2` nor :math:`A` preserves norms, so these are
simulations of linear maps rather than of quantum circuits. Amplitude states come in
three forms: :class:`DenseState` holds every amplitude, :class:`PrefixState` is the
uniform state over the indices sharing a bit prefix, and :class:`BasisState` is a
single scaled basis ket. Inner products between the implicit forms never touch a
vector of length :math:`N`.
"""

import logging
import math
from abc import abstractmethod
from collections.abc import Sequence
from typing import NamedTuple, Union

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, Float
from typing_extensions import override

from tourax.util import (
    DENSE_QUBIT_LIMIT,
    ZERO_TOLERANCE,
    BadPrefixError,
    DimensionMismatchError,
    TargetAbsentError,
    TooLargeError,
)

_logger = logging.getLogger(__name__)

BITS = frozenset("01")


def _check_qubits(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError("'n' must be at least 1")
    return n


class AmplitudeState(eqx.Module):
    """Real amplitudes over the :math:`2^n` basis states of an n-qubit register."""

    n: eqx.AbstractVar[int]

    @property
    def dimension(self) -> int:
        """Number of basis states."""
        return 2**self.n

    @abstractmethod
    def amplitude(self, index: int) -> float:
        """Return the amplitude of basis state 'index'."""

    @abstractmethod
    def to_dense(self) -> "DenseState":
        """Materialise every amplitude."""


class DenseState(AmplitudeState):
    """
    Amplitude state holding every amplitude.

    :param n: Qubit count, at most :data:`~tourax.util.DENSE_QUBIT_LIMIT`
    :param amps: Amplitude of each basis state
    """

    n: int = eqx.field(converter=int)
    amps: Float[Array, " N"] = eqx.field(converter=lambda x: jnp.asarray(x, float))

    def __check_init__(self):
        """Check that 'amps' spans the register."""
        if self.n > DENSE_QUBIT_LIMIT:
            raise TooLargeError(
                f"'n' must be at most {DENSE_QUBIT_LIMIT} for a dense state"
            )
        if self.amps.shape != (2**self.n,):
            raise DimensionMismatchError(
                f"'amps' must hold {2**self.n} amplitudes, got shape {self.amps.shape}"
            )

    @override
    def amplitude(self, index: int) -> float:
        return float(self.amps[index])

    @override
    def to_dense(self) -> "DenseState":
        return self


class PrefixState(AmplitudeState):
    """
    Uniform state over the basis indices whose leading bits equal 'prefix'.

    Each of the :math:`2^{n-k}` indices sharing a :math:`k`-bit prefix has amplitude
    :math:`2^{-(n-k)/2}`, so the state is normalised; the empty prefix gives the
    uniform state over the whole register.

    :param n: Qubit count
    :param prefix: Leading bits, most significant first
    """

    n: int = eqx.field(converter=int)
    prefix: str = ""

    def __check_init__(self):
        """Check that 'prefix' is a bit string that fits the register."""
        if not set(self.prefix) <= BITS:
            raise BadPrefixError(f"'prefix' must be a bit string, got {self.prefix!r}")
        if len(self.prefix) > self.n:
            raise BadPrefixError(
                f"'prefix' has {len(self.prefix)} bits but the register has {self.n}"
            )

    @property
    def free_bits(self) -> int:
        """Number of bits not fixed by the prefix."""
        return self.n - len(self.prefix)

    @property
    def value(self) -> float:
        """Common amplitude of every index in the support."""
        return 2.0 ** (-self.free_bits / 2)

    def contains(self, index: int) -> bool:
        """Return whether 'index' starts with the prefix."""
        return not self.prefix or index >> self.free_bits == int(self.prefix, 2)

    @override
    def amplitude(self, index: int) -> float:
        return self.value if self.contains(index) else 0.0

    @override
    def to_dense(self) -> DenseState:
        if self.n > DENSE_QUBIT_LIMIT:
            raise TooLargeError(
                f"'n' must be at most {DENSE_QUBIT_LIMIT} for a dense state"
            )
        start = int(self.prefix, 2) << self.free_bits if self.prefix else 0
        amps = jnp.zeros(self.dimension)
        amps = amps.at[start : start + 2**self.free_bits].set(self.value)
        return DenseState(self.n, amps)


class BasisState(AmplitudeState):
    """
    A scaled basis ket :math:`c |x\\rangle`.

    :param n: Qubit count
    :param index: Basis index :math:`x`
    :param coefficient: Scale :math:`c`
    """

    n: int = eqx.field(converter=int)
    index: int = eqx.field(converter=int)
    coefficient: float = eqx.field(default=1.0, converter=float)

    def __check_init__(self):
        """Check that 'index' lies in the register."""
        if not 0 <= self.index < 2**self.n:
            raise ValueError(f"'index' must lie in [0, {2**self.n}), got {self.index}")

    @override
    def amplitude(self, index: int) -> float:
        return self.coefficient if index == self.index else 0.0

    @override
    def to_dense(self) -> DenseState:
        if self.n > DENSE_QUBIT_LIMIT:
            raise TooLargeError(
                f"'n' must be at most {DENSE_QUBIT_LIMIT} for a dense state"
            )
        amps = jnp.zeros(self.dimension).at[self.index].set(self.coefficient)
        return DenseState(self.n, amps)


class SearchOracle(eqx.Module):
    """
    Membership predicate :math:`f_t(x) = [x = t]` over an :math:`n`-qubit register.

    :param n: Qubit count
    :param t: Target index in :math:`[0, 2^n)`
    """

    n: int = eqx.field(converter=int)
    t: int = eqx.field(converter=int)

    def __check_init__(self):
        """Check that the target lies in the register."""
        _check_qubits(self.n)
        if not 0 <= self.t < 2**self.n:
            raise ValueError(f"'t' must lie in [0, {2**self.n}), got {self.t}")

    def __call__(self, x: int) -> bool:
        """Answer whether 'x' is the target."""
        return x == self.t

    def target_state(self) -> BasisState:
        """Return the basis ket :math:`|t\\rangle`."""
        return BasisState(self.n, self.t)


class BagSplit(NamedTuple):
    """One halving of the classical search: the first half and its membership test."""

    first_half: tuple[int, ...]
    inner_product: float


class BitwiseStep(NamedTuple):
    """
    One iteration of :func:`qsearch_bitwise`.

    ``amplitude`` is the per-index amplitude of the retained prefix state and ``tests``
    the number of inner products the iteration evaluated.
    """

    prefix: str
    inner_product: float
    amplitude: float
    tests: int


def _check_same_register(a: Union[AmplitudeState, SearchOracle], b: AmplitudeState):
    if a.n != b.n:
        raise DimensionMismatchError(f"registers differ: {a.n} and {b.n} qubits")


def inner_product(a: AmplitudeState, b: AmplitudeState) -> float:
    r"""
    Compute :math:`\langle a | b \rangle = \sum_x a(x) b(x)`.

    Basis kets and pairs of prefix states are handled without materialising either
    state.

    :param a: First state
    :param b: Second state, on the same register
    :return: The real inner product
    """
    _check_same_register(a, b)
    if isinstance(a, BasisState):
        return a.coefficient * b.amplitude(a.index)
    if isinstance(b, BasisState):
        return b.coefficient * a.amplitude(b.index)
    if isinstance(a, PrefixState) and isinstance(b, PrefixState):
        longer, shorter = sorted((a, b), key=lambda s: len(s.prefix), reverse=True)
        if not longer.prefix.startswith(shorter.prefix):
            return 0.0
        return 2**longer.free_bits * longer.value * shorter.value
    return float(jnp.dot(a.to_dense().amps, b.to_dense().amps))


def norm(state: AmplitudeState) -> float:
    """Return the Euclidean norm of 'state'."""
    return math.sqrt(inner_product(state, state))


def _membership(bag: Sequence[int], t: int) -> float:
    """Inner product of the indicator vectors of 'bag' and of ``{t}``."""
    return float(len(set(bag) & {t}))


def classical_bag_search(
    items: Sequence[int], t: int
) -> tuple[int, tuple[BagSplit, ...]]:
    """
    Find 'items' member 't' by repeated halving.

    Each split moves the first half of the bag, rounded up, into a new bag and keeps
    whichever bag the membership test places the target in. At most
    :math:`\\lceil \\log_2 |B| \\rceil` splits are made.

    :param items: The bag, in its stored order; repeats are dropped
    :param t: Target
    :return: The target and the trace of splits
    """
    bag = list(dict.fromkeys(items))
    if not bag or _membership(bag, t) == 0:
        raise TargetAbsentError(f"target {t} is not in the bag")
    trace = []
    while len(bag) > 1:
        half = math.ceil(len(bag) / 2)
        first, second = bag[:half], bag[half:]
        overlap = _membership(first, t)
        trace.append(BagSplit(tuple(first), overlap))
        _logger.debug("Split %s: %s", first, overlap)
        bag = first if overlap else second
    return bag[0], tuple(trace)


def make_uniform_state(n: int) -> PrefixState:
    """
    Return the uniform state :math:`H^{\\otimes n} |0 \\dots 0\\rangle`.

    :param n: Qubit count, at least one
    :return: Amplitude :math:`2^{-n/2}` on every basis state
    """
    return PrefixState(_check_qubits(n))


def make_prefix_state(n: int, prefix: str) -> PrefixState:
    """
    Return the prefix ket followed by :math:`H^{\\otimes (n-k)} |0 \\dots 0\\rangle`.

    :param n: Qubit count, at least one
    :param prefix: The :math:`k \\le n` leading bits
    :return: The uniform state over the indices starting with 'prefix'
    """
    return PrefixState(_check_qubits(n), prefix)


def qsearch_bitwise(
    n: int, oracle: SearchOracle
) -> tuple[int, tuple[BitwiseStep, ...]]:
    """
    Fix the target bit by bit.

    At iteration :math:`k` the prefix is extended by ``0`` if the target overlaps that
    prefix state and by ``1`` otherwise, so :math:`n` iterations and at most
    :math:`2n` inner products recover the target.

    :param n: Qubit count
    :param oracle: Oracle marking the target
    :return: The target index and one trace entry per iteration
    """
    n = _check_qubits(n)
    if oracle.n != n:
        raise DimensionMismatchError(f"oracle has {oracle.n} qubits, expected {n}")
    target = oracle.target_state()
    prefix, trace = "", []
    for _ in range(n):
        tests = 1
        state = make_prefix_state(n, prefix + "0")
        overlap = inner_product(target, state)
        if overlap <= ZERO_TOLERANCE:
            tests += 1
            state = make_prefix_state(n, prefix + "1")
            overlap = inner_product(target, state)
        prefix = state.prefix
        trace.append(BitwiseStep(prefix, overlap, state.value, tests))
        _logger.debug("Prefix %s: %s", prefix, overlap)
    return int(prefix, 2), tuple(trace)


def apply_oracle(state: AmplitudeState, oracle: SearchOracle) -> AmplitudeState:
    """
    Apply :math:`O |x\\rangle = (-1)^{f_t(x)} |x\\rangle`.

    :param state: State to transform
    :param oracle: Oracle on the same register
    :return: 'state' with the target amplitude negated
    """
    _check_same_register(oracle, state)
    if isinstance(state, BasisState):
        if state.index != oracle.t:
            return state
        return BasisState(state.n, state.index, -state.coefficient)
    dense = state.to_dense()
    return DenseState(dense.n, dense.amps.at[oracle.t].multiply(-1.0))


def apply_mk(state: AmplitudeState, psi: AmplitudeState, k: int) -> DenseState:
    """
    Apply :math:`M_k = 2^k |\\psi\\rangle\\langle\\psi| - (2^k - 1) I`.

    :math:`M_1` is the reflection about :math:`\\psi`; larger 'k' stretch every
    direction orthogonal to :math:`\\psi`.

    :param state: State to transform
    :param psi: Normalised state defining the operator
    :param k: Nonnegative exponent
    :return: :math:`2^k \\langle\\psi|s\\rangle \\psi - (2^k - 1) s`
    """
    _check_same_register(state, psi)
    if k < 0:
        raise ValueError("'k' must be nonnegative")
    scale = 2.0**k
    projection = scale * inner_product(psi, state)
    amps = projection * psi.to_dense().amps - (scale - 1) * state.to_dense().amps
    return DenseState(state.n, amps)


def qsearch_one_step(n: int, oracle: SearchOracle) -> DenseState:
    """
    Apply :math:`T_{n-1} = M_{n-1} O` once to the uniform state.

    The result is :math:`c |t\\rangle` with :math:`c = 2 (2^{n-1} - 1) / \\sqrt{2^n}`,
    using one oracle application and one inner product. For :math:`n = 1` the
    coefficient is zero and the output is the zero vector.

    :param n: Qubit count
    :param oracle: Oracle marking the target
    :return: The dense output state
    """
    psi = make_uniform_state(n).to_dense()
    return apply_mk(apply_oracle(psi, oracle), psi, n - 1)


def apply_nonunitary(state: AmplitudeState, oracle: SearchOracle) -> DenseState:
    """
    Apply :math:`A = \\frac{\\sqrt{N}}{2} (I - O)`.

    :math:`A` keeps only the target component, scaled by :math:`\\sqrt{N}`.

    :param state: State to transform
    :param oracle: Oracle on the same register
    :return: The dense output state
    """
    dense = state.to_dense()
    flipped = apply_oracle(dense, oracle).to_dense()
    scale = math.sqrt(dense.dimension) / 2
    return DenseState(dense.n, scale * (dense.amps - flipped.amps))


def qsearch_nonunitary(n: int, oracle: SearchOracle) -> DenseState:
    """
    Apply :math:`A` to the uniform state, giving exactly :math:`|t\\rangle`.

    :param n: Qubit count
    :param oracle: Oracle marking the target
    :return: The dense output state
    """
    return apply_nonunitary(make_uniform_state(n), oracle)
