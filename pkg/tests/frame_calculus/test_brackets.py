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
from taming_toolkit.frame_calculus.brackets import FrameCalculus
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import TORUS_PERTURBED
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.numerics.random_fields import random_function

KT_GRID = GridSpec.uniform(8, active=(True, True, True, False))
E1, E2, E1B, E2B = range(4)


class TestFrameCalculus(TestCase):
    """
    Unit tests for structure coefficients, the Nijenhuis tensor and the delta operators.
    """

    @classmethod
    def setUpClass(cls):
        cls.flat = FrameCalculus(build_manifold(FLAT_TORUS, GridSpec.uniform(4)))
        cls.kt = FrameCalculus(build_manifold(KODAIRA_THURSTON, KT_GRID))

    def test_flat_torus_brackets_vanish(self):
        """Coordinate frames commute and J is integrable."""
        self.assertEqual(0.0, self.flat.coefficients.max_abs())
        self.assertEqual(0.0, self.flat.nijenhuis_norm())
        self.assertLess(self.flat.integrability_defect(), 1e-12)

    @parameterized.expand(
        [
            ("e1_e2", E1, E2, 0.25),
            ("e1_e2b", E1, E2B, 0.25),
            ("e1b_e2", E1B, E2, -0.25),
            ("e1b_e2b", E1B, E2B, -0.25),
        ]
    )
    def test_kodaira_thurston_brackets(self, _name: str, first: int, second: int, coefficient: float):
        """
        Every bracket of e_1 or its conjugate with e_2 or its conjugate is a multiple of e_2 - conj e_2.

        :param first: Frame slot of the first vector
        :param second: Frame slot of the second vector
        :param coefficient: Expected multiple
        """
        bracket = self.kt.coefficients.bracket[:, first, second]
        np.testing.assert_allclose(bracket[E2], coefficient, atol=1e-12)
        np.testing.assert_allclose(bracket[E2B], -coefficient, atol=1e-12)
        np.testing.assert_allclose(bracket[E1], 0.0, atol=1e-12)
        np.testing.assert_allclose(bracket[E1B], 0.0, atol=1e-12)

    def test_kodaira_thurston_is_not_integrable(self):
        """N^2_12 = 1/4, which the d-_J(J df) defect detects."""
        self.assertAlmostEqual(0.25, self.kt.nijenhuis_norm(), places=12)
        self.assertGreater(self.kt.integrability_defect(), 1e-3)

    def test_kodaira_thurston_divergences_vanish(self):
        """div(e_1) = div(e_2) = 0 on the unimodular nilmanifold."""
        np.testing.assert_allclose(self.kt.coefficients.divergence, 0.0, atol=1e-12)

    @parameterized.expand([(FLAT_TORUS, GridSpec.uniform(4), {}), (KODAIRA_THURSTON, KT_GRID, {})])
    def test_structure_equation(self, catalog_id, grid, params):
        """
        d theta^s is rebuilt from the bracket coefficients.

        :param catalog_id: Catalog entry
        :param grid: Its grid
        :param params: Its parameters
        """
        frames = FrameCalculus(build_manifold(catalog_id, grid, params))
        self.assertLess(frames.structure_equation_residual(), 1e-12)

    def test_bracket_expansion_on_a_random_function(self):
        """[phi_A, phi_B] f equals the expansion in the frame."""
        field = random_function(self.kt.spec, np.random.default_rng(0), band=1)
        self.assertLess(self.kt.bracket_residual(field), 1e-10)

    def test_perturbed_torus_brackets_vary(self):
        """A varying frame has varying, non-zero brackets."""
        frames = FrameCalculus(build_manifold(TORUS_PERTURBED, GridSpec.uniform(8), {"epsilon": 0.1}))
        self.assertGreater(frames.coefficients.max_abs(), 1e-3)

    def test_del_delbar_on_flat_torus(self):
        """d(J df) = -2 sqrt(-1) del delbar f on a Kaehler spec."""
        calculus = self.flat.calculus
        values = random_function(self.flat.spec, np.random.default_rng(3), band=1)
        d_j_df = calculus.d(calculus.j_act(calculus.d(FormField.scalar(values))))
        expected = self.flat.del_delbar(values) * (-2.0j)
        np.testing.assert_allclose(d_j_df.components, expected.components, atol=1e-10)

    def test_commutator_reduces_to_hessian_on_flat_torus(self):
        """Without brackets the commutator of delta_i and conj e_j is h_{i jbar}(phi) u."""
        frames = FrameCalculus(build_manifold(FLAT_TORUS, GridSpec.uniform(8)))
        rng = np.random.default_rng(9)
        values = random_function(frames.spec, rng, band=1)
        weight = random_function(frames.spec, rng, band=1)
        for i in range(2):
            for j in range(2):
                check = frames.commutator_check(i, j, values, weight)
                self.assertLess(check.residual, 1e-10)
                self.assertEqual(0.0, check.first_order_magnitude)

    def test_commutator_with_brackets(self):
        """On the nilmanifold the first-order terms survive and composition still matches expansion."""
        rng = np.random.default_rng(1)
        values = random_function(self.kt.spec, rng, band=1)
        weight = random_function(self.kt.spec, rng, band=1)
        check = self.kt.commutator_check(0, 1, values, weight)
        self.assertLess(check.residual, 1e-9)
        self.assertGreater(check.first_order_magnitude, 0.0)

    def test_coefficients_at(self):
        """The JSON view carries brackets, N, divergences and traces as (re, im) pairs."""
        view = self.kt.coefficients_at((0, 0, 0))
        self.assertEqual((0.25, 0.0), tuple(np.round(view["bracket"]["B^e2_e1e2"], 12)))
        self.assertEqual(24, len(view["bracket"]))
        self.assertEqual({"nijenhuis", "bracket", "divergence", "trace"}, set(view))

    def test_nijenhuis_is_linear_in_epsilon(self):
        """|N| grows like epsilon on the perturbed torus: the log-log slope is 1."""
        epsilons = (0.025, 0.05, 0.1)
        norms = [
            FrameCalculus(build_manifold(TORUS_PERTURBED, KT_GRID, {"epsilon": epsilon})).nijenhuis_norm()
            for epsilon in epsilons
        ]
        slope, _ = np.polyfit(np.log(epsilons), np.log(norms), 1)
        self.assertAlmostEqual(1.0, slope, delta=0.05)
        self.assertGreater(norms[0], 0.0)
