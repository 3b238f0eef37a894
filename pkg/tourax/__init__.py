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
Tourax workbench for travelling salesman tours on weighted complete graphs.

The tourax library builds, bounds and certifies Hamiltonian circuits and paths of an
instance given by a symmetric :math:`p \times p` weight matrix, optionally with planar
coordinates. It offers construction heuristics, exact solvers over the ordered list of
edges, a permutation oracle, lower bounds read off sorted weight arrays, a
Hamiltonicity decision from fundamental cutsets, and simulated target searches.
"""

import jax

__version__ = "0.1.0"

jax.config.update("jax_enable_x64", True)

# pylint: disable=unused-import
from tourax.bounds import (
    SortedWeightArrays,
    build_swa,
    first_array_certificate,
    first_array_lower_bound,
    gap_bound,
)
from tourax.cutset import (
    FCutsetMatrix,
    SimpleGraph,
    SpanningTree,
    build_fcutset_matrix,
    cutset_tsp_greedy,
    decide_hamiltonian,
    verify_selection,
)
from tourax.data import Instance, gen_random_instance
from tourax.solvers.exact import brute_force, owal_exact
from tourax.solvers.heuristics import (
    angular_sweep,
    contraction_tour,
    modified_nn,
    nearest_neighbor,
    transposition_approx_v1,
    transposition_approx_v2,
)
from tourax.tour import OWAL, EdgeSubList, HamPath, Tour, build_owal, tour_weight
# pylint: enable=unused-import
