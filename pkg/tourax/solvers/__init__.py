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

"""Solvers for building tours and paths."""

from tourax.solvers.base import (
    BudgetedSolver,
    CircuitSolver,
    ModalSolver,
    Solver,
)
from tourax.solvers.exact import BruteForce, OWALExact, SolveReport
from tourax.solvers.heuristics import (
    AngularSweep,
    Contraction,
    ExclusionMatrices,
    ModifiedNearestNeighbor,
    NearestNeighbor,
    Relabeling,
    SweepFrame,
    TranspositionV1,
    TranspositionV2,
)

__all__ = [
    "AngularSweep",
    "BruteForce",
    "BudgetedSolver",
    "CircuitSolver",
    "Contraction",
    "ExclusionMatrices",
    "ModalSolver",
    "ModifiedNearestNeighbor",
    "NearestNeighbor",
    "OWALExact",
    "Relabeling",
    "Solver",
    "SolveReport",
    "SweepFrame",
    "TranspositionV1",
    "TranspositionV2",
]
