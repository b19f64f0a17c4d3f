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

from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.elliptic.lejmi import LejmiOperator
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import PreconditionError
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.numerics.random_fields import random_form


class TestLejmiOperator(TestCase):
    """
    Unit tests for the operator P = P-_J d d* on J-anti-invariant 2-forms.
    """

    @classmethod
    def setUpClass(cls):
        cls.flat = LejmiOperator(build_manifold(FLAT_TORUS, GridSpec.uniform(4)))
        cls.kt = LejmiOperator(build_manifold(KODAIRA_THURSTON, GridSpec.uniform(8, active=(True, True, True, False))))

    def test_projection_is_anti_invariant(self):
        """P-_J beta is J-anti-invariant and P-_J is idempotent."""
        calculus = self.kt.calculus
        beta = random_form(self.kt.spec, np.random.default_rng(0), 2)
        projected = self.kt.project(beta)
        np.testing.assert_allclose(calculus.j_act(projected).components, -projected.components, atol=1e-12)
        np.testing.assert_allclose(self.kt.project(projected).components, projected.components, atol=1e-12)

    def test_self_adjoint(self):
        """<P a, b> = <a, P b> on anti-invariant forms."""
        calculus = self.kt.calculus
        rng = np.random.default_rng(1)
        first = self.kt.project(random_form(self.kt.spec, rng, 2))
        second = self.kt.project(random_form(self.kt.spec, rng, 2))
        left = calculus.inner(self.kt.lejmi_apply(first), second)
        right = calculus.inner(first, self.kt.lejmi_apply(second))
        self.assertLess(abs(left - right) / max(abs(left), 1e-300), 1e-10)

    def test_rejects_invariant_input(self):
        """F is J-invariant, so P does not apply to it."""
        with self.assertRaises(PreconditionError):
            self.kt.lejmi_apply(self.kt.calculus.fundamental_form())

    def test_flat_torus_kernel(self):
        """Re and Im of dt ^ dy + ... span the closed anti-invariant forms of the flat torus."""
        self.assertEqual(2, self.flat.lejmi_kernel(sector="constant").dimension)
        self.assertEqual(2, self.flat.lejmi_kernel(n_modes=4, sector="grid").dimension)

    def test_unknown_sector(self):
        """Only the constant and grid sectors exist."""
        with self.assertRaises(ConfigurationError):
            self.flat.lejmi_kernel(sector="harmonic")

    def test_solve_is_minimal_norm(self):
        """A solve of P sigma = rhs leaves sigma orthogonal to the kernel."""
        rng = np.random.default_rng(2)
        source = self.flat.project(random_form(self.flat.spec, rng, 2, band=1, with_constant=False))
        solution = self.flat.solve(self.flat.coordinates(source), self.flat.calculus.norm(source))
        self.assertLess(solution.relative_residual, 1e-8)
        for form in self.flat.lejmi_kernel().forms:
            self.assertLess(abs(self.flat.calculus.inner(solution.form, form)), 1e-10)
        image = self.flat.lejmi_apply(solution.form)
        np.testing.assert_allclose(image.components, source.components, atol=1e-8)

    def test_kernel_defects_are_reported_once(self):
        """Solves with a kernel component log nothing themselves; the flush logs one summary."""
        operator = LejmiOperator(build_manifold(FLAT_TORUS, GridSpec.uniform(4)))
        rng = np.random.default_rng(3)
        source = operator.project(random_form(operator.spec, rng, 2, band=1, with_constant=False))
        rhs = operator.coordinates(source + operator.lejmi_kernel().forms[0] * 0.5)
        with self.assertNoLogs("LejmiOperator", level="WARNING"):
            defects = [
                operator.solve(rhs, operator.calculus.norm(source), label=label).kernel_defect
                for label in ("first", "second", "third")
            ]
        self.assertGreater(min(defects), 1e-8)
        with self.assertLogs("LejmiOperator", level="WARNING") as logs:
            worst = operator.flush_kernel_defects("three solves")
        self.assertEqual(1, len(logs.records))
        self.assertIn("3 right-hand sides", logs.output[0])
        self.assertAlmostEqual(max(defects), worst)
        self.assertEqual(0.0, operator.flush_kernel_defects("nothing since"))
