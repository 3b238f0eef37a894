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


from tourax.data import gen_random_instance
from tourax.solvers import NearestNeighbor, OWALExact

instance = gen_random_instance(seed=0, p=8, kind="uniform")
greedy_tour, _ = NearestNeighbor().solve(instance)
optimal_tour, report = OWALExact(mode="circuit").solve(instance)
print(greedy_tour.order, greedy_tour.weight)
print(optimal_tour.order, optimal_tour.weight, report.candidates_checked)
