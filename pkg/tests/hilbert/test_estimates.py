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
from parameterized import parameterized

from taming_toolkit.dataclass.galerkin import SolveReport
from taming_toolkit.dataclass.galerkin import TruncatedComplex
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import EmptySpaceError
from taming_toolkit.errors import NumericalError
from taming_toolkit.errors import PreconditionError
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.hilbert.assembly import GalerkinAssembler
from taming_toolkit.hilbert.estimates import DEGENERATE_CONSTANT
from taming_toolkit.hilbert.estimates import best_constant
from taming_toolkit.hilbert.estimates import closed_range_table
from taming_toolkit.hilbert.estimates import hormander_adjoint_solve
from taming_toolkit.hilbert.estimates import hormander_solve
from taming_toolkit.hilbert.estimates import random_complex
from taming_toolkit.hilbert.estimates import require_bound
from taming_toolkit.hilbert.estimates import spectral_gap_report

PLANE_GRID = GridSpec.uniform(8, active=(True, True, False, False))


class TestHormanderEstimates(TestCase):
    """
    Unit tests for the matrix-level estimate and the minimal-norm solves.
    """

    @parameterized.expand(
        [
            (0, (5, 7, 4), 3),
            (1, (12, 10, 6), 6),
            (2, (30, 25, 20), 10),
            (3, (9, 9, 0), 9),
        ]
    )
    def test_solve_matches_pseudoinverse(self, seed: int, dimensions, rank: int):
        """
        :param seed: Seed of the random complex
        :param dimensions: (dim H1, dim H2, dim H3)
        :param rank: Rank of T
        """
        rng = np.random.default_rng(seed)
        cx = random_complex(rng, dimensions, rank)
        target = cx.t_matrix @ rng.standard_normal(dimensions[0])
        report = hormander_solve(cx, target)
        oracle = np.linalg.pinv(cx.t_matrix) @ target
        np.testing.assert_allclose(report.solution, oracle, rtol=1e-8, atol=1e-10)
        self.assertEqual(1.0, report.bounds["bound_holds"])
        self.assertLess(report.residuals["range"], 1e-9)
        self.assertLess(report.defects["kernel_component"], 1e-8)

    def test_random_complex_is_exact(self):
        """S T = 0 and rank T is as requested."""
        cx = random_complex(np.random.default_rng(7), (6, 8, 5), 4)
        np.testing.assert_allclose(cx.s_matrix @ cx.t_matrix, 0.0, atol=1e-10)
        self.assertEqual(4, np.linalg.matrix_rank(cx.t_matrix))
        self.assertEqual({"H1": 6, "H2": 8, "H3": 5}, cx.dimensions)

    def test_random_complex_rejects_bad_rank(self):
        """A rank above the dimensions is a configuration error."""
        with self.assertRaises(ConfigurationError):
            random_complex(np.random.default_rng(0), (3, 4, 4), 5)

    def test_target_outside_kernel_of_s(self):
        """v with S v != 0 violates the precondition."""
        rng = np.random.default_rng(4)
        cx = random_complex(rng, (4, 6, 3), 3)
        with self.assertRaises(PreconditionError):
            hormander_solve(cx, rng.standard_normal(6))

    def test_zero_target(self):
        """v = 0 gives w = 0 without touching the estimate."""
        cx = random_complex(np.random.default_rng(5), (4, 6, 3), 3)
        report = hormander_solve(cx, np.zeros(6))
        np.testing.assert_array_equal(np.zeros(4), report.solution)

    def test_best_constant_of_an_isometry(self):
        """T = identity and S = 0 give C = 1."""
        cx = TruncatedComplex.from_matrices(np.eye(3), np.zeros((0, 3)))
        report = best_constant(cx)
        self.assertAlmostEqual(1.0, report.constant, places=12)
        self.assertAlmostEqual(1.0 / np.sqrt(2.0), report.constant_sum_lower, places=12)
        self.assertFalse(report.degenerate)

    def test_best_constant_degenerates(self):
        """A direction seen by neither T* nor S is flagged."""
        t_matrix = np.array([[1.0, 0.0], [0.0, 0.0]])
        report = best_constant(TruncatedComplex.from_matrices(t_matrix, np.zeros((0, 2))))
        self.assertTrue(report.degenerate)
        self.assertEqual(DEGENERATE_CONSTANT, report.constant)
        self.assertAlmostEqual(1.0, abs(report.minimizer[1]), places=12)

    def test_best_constant_on_trivial_middle_space(self):
        """An empty H2 has no estimate."""
        with self.assertRaises(EmptySpaceError):
            best_constant(TruncatedComplex.from_matrices(np.zeros((0, 3)), np.zeros((0, 0))))

    def test_adjoint_solve(self):
        """T* h = w with h in ker S and the norm bound."""
        rng = np.random.default_rng(11)
        cx = random_complex(rng, (7, 9, 6), 5)
        source = cx.t_matrix.T @ rng.standard_normal(9)
        report = hormander_adjoint_solve(cx, source)
        np.testing.assert_allclose(cx.t_matrix.T @ report.solution, source, atol=1e-9 * np.linalg.norm(source))
        self.assertLess(float(np.linalg.norm(cx.s_matrix @ report.solution)), 1e-9 * np.linalg.norm(source))
        self.assertEqual(1.0, report.bounds["bound_holds"])

    def test_adjoint_solve_rejects_kernel_component(self):
        """w with a component in ker T violates the precondition."""
        rng = np.random.default_rng(12)
        cx = random_complex(rng, (7, 9, 6), 3)
        with self.assertRaises(PreconditionError):
            hormander_adjoint_solve(cx, rng.standard_normal(7))

    def test_require_bound(self):
        """A violated bound raises, a held one does not."""
        require_bound(SolveReport("ok", np.zeros(1), bounds={"bound_holds": 1.0}))
        with self.assertRaises(NumericalError):
            require_bound(SolveReport("broken", np.zeros(1), bounds={"bound_holds": 0.0}))


class TestSpectralGaps(TestCase):
    """
    Unit tests for the closed-range diagnostics on the flat torus.
    """

    @classmethod
    def setUpClass(cls):
        cls.assembler = GalerkinAssembler(build_manifold(FLAT_TORUS, PLANE_GRID))

    def test_gradient_gap(self):
        """The smallest nonzero singular value of d on functions is 2 pi at every cutoff."""
        rows = spectral_gap_report(self.assembler, "d0", [1, 2])
        self.assertEqual([1, 2], [row["cutoff"] for row in rows])
        for row in rows:
            self.assertAlmostEqual(2.0 * np.pi, row["gap"], places=8)
            self.assertFalse(row["collapse"])

    def test_zero_operator_has_no_gap(self):
        """The zero operator reports no nonzero singular values."""
        rows = closed_range_table(self.assembler, ["zero", "d0"], [1, 2])
        self.assertEqual(4, len(rows))
        self.assertIsNone(rows[0]["gap"])
        self.assertEqual("no nonzero singular values", rows[0]["note"])

    def test_gap_trend_needs_two_cutoffs(self):
        """One cutoff is not a trend."""
        with self.assertRaises(ConfigurationError):
            spectral_gap_report(self.assembler, "d0", [1])
