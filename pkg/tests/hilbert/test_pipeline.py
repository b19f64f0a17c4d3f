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

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import EmptySpaceError
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import TORUS_PERTURBED
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.hilbert.pipeline import Theorem1Pipeline
from taming_toolkit.numerics.random_fields import random_form

PLANE_GRID = GridSpec.uniform(4, active=(True, True, False, False))
KT_GRID = GridSpec.uniform(8, active=(True, True, True, False))


class TestTheorem1Pipeline(TestCase):
    """
    Unit tests for D~ f = da at finite cutoff.
    """

    @classmethod
    def setUpClass(cls):
        cls.kt = Theorem1Pipeline(build_manifold(KODAIRA_THURSTON, KT_GRID), 1)
        cls.flat = Theorem1Pipeline(build_manifold(FLAT_TORUS, PLANE_GRID), 1)

    @parameterized.expand([(0,), (1,)])
    def test_random_one_form_on_nilmanifold(self, seed: int):
        """
        The Hoermander route solves D~ f = da, agrees with least squares and obeys the bound.

        :param seed: Seed of the band-1 input
        """
        alpha = random_form(self.kt.spec, np.random.default_rng(seed), 1, band=1, with_constant=False)
        report = self.kt.run(alpha)
        self.assertLess(report.residuals["d_tilde"], 1e-6)
        self.assertLess(report.residuals["routes_agree"], 1e-6)
        self.assertEqual(1.0, report.bounds["bound_holds"])
        self.assertEqual(self.kt.spec.shape, report.solution.shape)

    def test_closed_input(self):
        """A harmonic a has da = 0, so f = 0."""
        components = np.zeros((4,) + self.flat.spec.shape)
        components[0] = 1.0
        report = self.flat.run(FormField(1, components))
        np.testing.assert_allclose(report.solution, 0.0, atol=1e-10)

    def test_poincare_constant(self):
        """On the unit flat torus ||a|| <= ||da|| / 2 pi on coexact forms."""
        self.assertAlmostEqual(1.0 / (2.0 * np.pi), self.flat.poincare_constant(), places=8)

    def test_harmonic_widening_degenerates(self):
        """A harmonic direction is invisible to T* and S, so the constant inflates."""
        demo = self.flat.degeneracy_demo("harmonic")
        self.assertGreaterEqual(demo["inflation"], 10.0)
        self.assertTrue(demo["widened_degenerate"])

    def test_unknown_widening(self):
        """Only the listed widenings are accepted."""
        with self.assertRaises(ConfigurationError):
            self.flat.degeneracy_demo("diagonal")


class TestTheorem1PerturbedTorus(TestCase):
    """
    D~ f = da on the non-integrable torus, where W~ leaves the truncated coexact space.
    """

    @classmethod
    def setUpClass(cls):
        spec = build_manifold(TORUS_PERTURBED, KT_GRID, {"epsilon": 0.1})
        cls.pipeline = Theorem1Pipeline(spec, 1)

    def test_space_contains_w_tilde_images(self):
        """V is extended until the W~ images lie in it and d-_J vanishes on them."""
        cx = self.pipeline.complex
        self.assertGreater(cx.diagnostics["truncation_leakage"], 1e-8)
        self.assertGreater(cx.diagnostics["extension_dimension"], 0.0)
        self.assertLess(cx.diagnostics["image_leakage"], 1e-6)
        self.assertLess(cx.diagnostics["composite_norm"], 1e-6)
        self.assertLess(cx.diagnostics["gram_residual"], 1e-8)
        self.assertIn("sigma_kernel_defect", cx.diagnostics)

    @parameterized.expand([(0,), (1,), (2,), (3,), (4,)])
    def test_random_one_form(self, seed: int):
        """
        The solve succeeds on the perturbed torus and keeps a nonzero d-_J-closed part.

        :param seed: Seed of the band-1 input
        """
        alpha = random_form(self.pipeline.spec, np.random.default_rng(seed), 1, band=1, with_constant=False)
        report = self.pipeline.run(alpha)
        self.assertLess(report.residuals["d_tilde"], 1e-6)
        self.assertLess(report.residuals["routes_agree"], 1e-6)
        self.assertLess(report.defects["d_minus_removed"], 1.0 - 1e-6)
        self.assertLess(report.defects["composite_norm"], 1e-6)
        self.assertGreater(report.bounds["norm_psi"], 0.0)
        self.assertEqual(1.0, report.bounds["bound_holds"])

    def test_fully_anti_closed_input_is_refused(self):
        """An input whose V part is orthogonal to ker d-_J leaves nothing to solve, which is an error."""
        cx = self.pipeline.complex
        kernel, _ = self.pipeline.closed_directions()
        row = cx.s_matrix[0] - kernel @ (kernel.T @ cx.s_matrix[0])
        alpha = cx.middle.combine(row / np.linalg.norm(row))
        with self.assertRaises(EmptySpaceError):
            self.pipeline.run(alpha)
