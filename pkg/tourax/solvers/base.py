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

"""Abstract base classes for constructing different types of tour solvers."""

from abc import abstractmethod
from typing import Generic, Optional, TypeVar

import equinox as eqx

from tourax.data import Instance
from tourax.tour import Solution, Tour
from tourax.util import DEFAULT_BUDGET, Mode, check_budget, check_mode

_Solution = TypeVar("_Solution", bound=Solution)
_State = TypeVar("_State")


class Solver(eqx.Module, Generic[_Solution, _State]):
    """
    Base class for tour solvers.

    Solver is generic on the type of solution returned, distinguishing solvers that only
    ever build circuits from those that build paths, or either.
    """

    @abstractmethod
    def solve(
        self, instance: Instance, solver_state: Optional[_State] = None
    ) -> tuple[_Solution, _State]:
        """
        Build a tour of 'instance'.

        :param instance: The instance to solve
        :param solver_state: Solution state information, primarily used to cache
            expensive intermediate values such as sorted edge lists
        :return: a tuple of the solution and intermediate solver state information
        """


class CircuitSolver(Solver[Tour, _State], Generic[_State]):
    """
    Solver which returns a :class:`~tourax.tour.Tour`.

    A convenience class for the most common solver type in this package.
    """


class ModalSolver(Solver[Solution, _State], Generic[_State]):
    """
    A :class:`Solver` which builds either a circuit or a path.

    :param mode: ``circuit`` or ``path``
    """

    mode: Mode = "circuit"

    def __check_init__(self):
        """Check that 'mode' is known."""
        check_mode(self.mode)


class BudgetedSolver(Solver):
    """
    A :class:`Solver` whose search stops after a fixed number of steps.

    :param budget: Maximum nodes or candidates examined before
        :class:`~tourax.util.BudgetExhaustedError` is raised
    """

    budget: int = eqx.field(default=DEFAULT_BUDGET, converter=int)

    def __check_init__(self):
        """Check that 'budget' is feasible."""
        check_budget(self.budget)
