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

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.forms.hodge import HodgeDecomposer
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.numerics.random_fields import random_form


class TestHodgeDecomposer(TestCase):
    """
    Unit tests for the Hodge decomposition of 1-forms.
    """

    def test_flat_torus_harmonic_forms(self):
        """dt, dx, dy, dz span the harmonic 1-forms of the flat torus."""
        calculus = ExteriorCalculus(build_manifold(FLAT_TORUS, GridSpec.uniform(4)))
        self.assertEqual(4, len(HodgeDecomposer(calculus).harmonic_basis))

    def test_kodaira_thurston_harmonic_forms(self):
        """dz is not closed on the nilmanifold, so only dt, dx, dy survive."""
        spec = build_manifold(KODAIRA_THURSTON, GridSpec.uniform(4, active=(True, True, True, False)))
        self.assertEqual(3, len(HodgeDecomposer(ExteriorCalculus(spec)).harmonic_basis))

    def test_decomposition_is_orthogonal(self):
        """exact + harmonic + coexact rebuilds the form, and the pieces are L2 orthogonal."""
        calculus = ExteriorCalculus(build_manifold(FLAT_TORUS, GridSpec.uniform(4)))
        decomposer = HodgeDecomposer(calculus)
        alpha = random_form(calculus.spec, np.random.default_rng(0), 1, band=1)
        exact, harmonic, coexact = decomposer.decompose(alpha)
        rebuilt = exact + harmonic + coexact
        np.testing.assert_allclose(rebuilt.components, alpha.components, atol=1e-12)
        scale = calculus.norm(alpha) ** 2
        for first, second in ((exact, harmonic), (exact, coexact), (harmonic, coexact)):
            self.assertLess(abs(calculus.inner(first, second)) / scale, 1e-9)
        self.assertLess(calculus.d_star(coexact).max_abs(), 1e-9)
        self.assertLess(calculus.d(exact).max_abs(), 1e-9)
        self.assertIsInstance(harmonic, FormField)
