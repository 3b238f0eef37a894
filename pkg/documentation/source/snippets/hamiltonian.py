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


from tourax.cutset import decide_hamiltonian, gen_random_graph

graph = gen_random_graph(seed=3, p=10, density=0.4)
decision = decide_hamiltonian(graph)
if decision.found:
    print("circuit", decision.order, "chords", decision.selection.chords)
else:
    print("no Hamiltonian circuit")
