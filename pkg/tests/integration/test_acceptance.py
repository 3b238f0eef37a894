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
Seeded acceptance batches checking every method against permutation oracles.
"""

import itertools
import unittest

from tourax.bounds import build_swa, first_array_certificate, first_array_lower_bound
from tourax.cutset import decide_hamiltonian, gen_random_graph
from tourax.data import gen_convex_instance, gen_random_instance
from tourax.experiments import ALGORITHM_MODES, GEOMETRIC_ALGORITHMS, make_solver
from tourax.solvers import AngularSweep, BruteForce, OWALExact
from tourax.solvers.heuristics import min_turning_tour, turning_sum
from tourax.tour import validate_sublist

KINDS = ("uniform", "euclidean")
HEURISTICS = ("nn", "mnn", "contract", "sweep", "tpv1", "tpv2")


def _has_hamiltonian_circuit(p: int, edges: set[frozenset]) -> bool:
    """Check every circuit through vertex 1 against an edge set."""
    for rest in itertools.permutations(range(2, p + 1)):
        order = (1, *rest)
        if all(
            frozenset((a, b)) in edges for a, b in zip(order, order[1:] + order[:1])
        ):
            return True
    return False


class TestExactAgreement(unittest.TestCase):
    """
    Test the sublist enumeration finds the permutation optimum.
    """

    def test_owal_matches_brute_force(self) -> None:
        """
        Solve 108 seeded instances with 4 to 9 vertices both ways, in both modes.
        """
        for kind, p, seed in itertools.product(KINDS, range(4, 10), range(9)):
            inst = gen_random_instance(seed, p, kind)
            for mode in ("circuit", "path"):
                with self.subTest(kind=kind, p=p, seed=seed, mode=mode):
                    exact, _ = OWALExact(mode=mode).solve(inst)
                    oracle, _ = BruteForce(mode=mode).solve(inst)
                    self.assertAlmostEqual(exact.weight, oracle.weight, places=9)


class TestHamiltonicity(unittest.TestCase):
    """
    Test the chord scan decides Hamiltonicity like a permutation scan.
    """

    def test_decisions_match(self) -> None:
        """
        Decide 200 sparse and dense random graphs with 4 to 7 vertices both ways.
        """
        for p, seed, density in itertools.product(range(4, 8), range(25), (0.2, 0.5)):
            with self.subTest(p=p, seed=seed, density=density):
                graph = gen_random_graph(seed, p, density)
                edges = {frozenset(edge) for edge in graph.edges}
                decision = decide_hamiltonian(graph)
                self.assertEqual(decision.found, _has_hamiltonian_circuit(p, edges))
                if decision.found:
                    order = decision.order
                    for a, b in zip(order, order[1:] + order[:1]):
                        self.assertIn(frozenset((a, b)), edges)


class TestHeuristicValidity(unittest.TestCase):
    """
    Test every heuristic returns a Hamiltonian structure of its instance.
    """

    def test_outputs_validate(self) -> None:
        """
        Run each heuristic on 500 seeded instances and validate its edge set.
        """
        for kind, p, seed in itertools.product(KINDS, range(4, 9), range(50)):
            inst = gen_random_instance(seed, p, kind)
            for algo in HEURISTICS:
                if algo in GEOMETRIC_ALGORITHMS and not inst.is_euclidean:
                    continue
                mode = ALGORITHM_MODES[algo][0]
                with self.subTest(kind=kind, p=p, seed=seed, algo=algo):
                    solution, _ = make_solver(algo).solve(inst)
                    self.assertTrue(validate_sublist(inst, solution.edges(), mode))


class TestConvexSweep(unittest.TestCase):
    """
    Test the angular sweep is optimal on points in convex position.
    """

    def test_sweep_optimal(self) -> None:
        """
        Compare 50 sweep circuits with 5 to 9 vertices with the permutation optimum.
        """
        for p, seed in itertools.product(range(5, 10), range(10)):
            with self.subTest(p=p, seed=seed):
                inst = gen_convex_instance(seed, p)
                tour, _ = AngularSweep().solve(inst)
                oracle, _ = BruteForce().solve(inst)
                self.assertAlmostEqual(tour.weight, oracle.weight, places=6)

    def test_optimum_turns_least(self) -> None:
        """
        Check the optimal circuit also minimises the turning sum, up to 7 vertices.
        """
        for p, seed in itertools.product(range(4, 8), range(10)):
            with self.subTest(p=p, seed=seed):
                inst = gen_convex_instance(seed, p)
                oracle, _ = BruteForce().solve(inst)
                least = min_turning_tour(inst)
                self.assertAlmostEqual(
                    turning_sum(inst, oracle.order),
                    turning_sum(inst, least.order),
                    places=6,
                )


class TestLowerBound(unittest.TestCase):
    """
    Test the first-array bound and certificate against the optimum.
    """

    def test_bound_below_optimum(self) -> None:
        """
        Check the bound never exceeds the optimum on 200 seeded instances.
        """
        for kind, p, seed in itertools.product(KINDS, range(4, 9), range(20)):
            with self.subTest(kind=kind, p=p, seed=seed):
                inst = gen_random_instance(seed, p, kind)
                optimum = BruteForce().solve(inst)[0].weight
                self.assertLessEqual(
                    first_array_lower_bound(build_swa(inst)), optimum + 1e-9
                )
                certificate = first_array_certificate(inst)
                if certificate.exact:
                    self.assertAlmostEqual(certificate.tour.weight, optimum)


if __name__ == "__main__":
    unittest.main()
