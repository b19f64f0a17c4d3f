# Copyright © 2025-2026 Cognizant Technology Solutions Corp, www.cognizant.com.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# END COPYRIGHT

from unittest import TestCase

import numpy as np

from taming_toolkit.errors import SolverDivergenceError
from taming_toolkit.numerics.krylov import solve_symmetric


class TestSolveSymmetric(TestCase):
    """
    Unit tests for the matrix-free conjugate gradient wrapper.
    """

    def test_positive_definite_system(self):
        """A well conditioned system is solved to the requested tolerance."""
        rng = np.random.default_rng(3)
        factor = rng.standard_normal((12, 12))
        matrix = factor @ factor.T + 12.0 * np.eye(12)
        rhs = rng.standard_normal(12)
        result = solve_symmetric(lambda vector: matrix @ vector, rhs, rtol=1e-12, max_iterations=200)
        np.testing.assert_allclose(matrix @ result.solution, rhs, atol=1e-9)
        self.assertLessEqual(result.relative_residual, 1e-10)

    def test_zero_rhs(self):
        """A zero right-hand side returns zero without iterating."""
        result = solve_symmetric(lambda vector: vector, np.zeros(5), rtol=1e-10, max_iterations=10)
        self.assertEqual(0, result.iterations)
        np.testing.assert_array_equal(np.zeros(5), result.solution)

    def test_consistent_singular_system_gives_minimal_norm(self):
        """Starting from zero keeps the iterate orthogonal to the kernel."""
        matrix = np.diag([2.0, 1.0, 0.0])
        rhs = np.array([2.0, 3.0, 0.0])
        result = solve_symmetric(lambda vector: matrix @ vector, rhs, rtol=1e-12, max_iterations=20)
        np.testing.assert_allclose(result.solution, [1.0, 3.0, 0.0], atol=1e-10)

    def test_unconverged_solve_raises(self):
        """One iteration on a badly conditioned system misses the target by far."""
        matrix = np.diag(np.logspace(0, 6, 10))
        rhs = np.ones(10)
        with self.assertRaises(SolverDivergenceError):
            solve_symmetric(lambda vector: matrix @ vector, rhs, rtol=1e-12, max_iterations=1)
