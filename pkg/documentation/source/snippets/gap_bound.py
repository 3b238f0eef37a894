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


from tourax.bounds import build_swa, first_array_lower_bound, gap_bound
from tourax.data import gen_random_instance
from tourax.solvers import Contraction

instance = gen_random_instance(seed=1, p=9, kind="euclidean")
tour, _ = Contraction().solve(instance)
swa = build_swa(instance)
print("lower bound", first_array_lower_bound(swa))
print("tour weight", tour.weight, "at most", gap_bound(swa, tour), "above optimal")
print("incident charging", gap_bound(swa, tour, charging="incident"))
