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

from taming_toolkit.cli.suites import LOOSE_FACTOR
from taming_toolkit.cli.suites import chern_suite
from taming_toolkit.cli.suites import hormander_oracle
from taming_toolkit.cli.suites import identity_suite
from taming_toolkit.cli.suites import kahler_baseline
from taming_toolkit.cli.suites import loosened
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.elliptic.w_operators import WOperatorBuilder
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import TORUS_PERTURBED
from taming_toolkit.geometry.catalog import build_manifold

KT_GRID = GridSpec.uniform(8, active=(True, True, True, False))
PLANE_GRID = GridSpec.uniform(8, active=(True, True, False, False))


class TestSuites(TestCase):
    """
    Runs the verify suites on small grids.
    """

    def test_identities_on_nilmanifold(self):
        """Every discrete identity holds on the nilmanifold."""
        spec = build_manifold(KODAIRA_THURSTON, KT_GRID)
        table = identity_suite(spec, ExteriorCalculus(spec), seed=0, samples=1, tolerance=1e-8)
        self.assertTrue(table.passed, table.failed())
        self.assertIn("d_star_is_minus_star_d_star", [row.name for row in table.rows])

    def test_kahler_baseline(self):
        """sigma vanishes and D~ is -2 sqrt(-1) del delbar on the flat torus."""
        spec = build_manifold(FLAT_TORUS, PLANE_GRID)
        table = kahler_baseline(spec, WOperatorBuilder(spec), seed=1, samples=2)
        self.assertTrue(table.passed, table.failed())

    def test_chern(self):
        """The connection formula matches its defining conditions."""
        table = chern_suite(build_manifold(KODAIRA_THURSTON, KT_GRID))
        self.assertTrue(table.passed, table.failed())
        self.assertNotIn("flat_gamma", [row.name for row in table.rows])

    def test_hormander_oracle(self):
        """The minimal-norm solve agrees with the pseudoinverse."""
        table = hormander_oracle(seed=4, count=5, largest=20)
        self.assertTrue(table.passed, table.failed())
        self.assertEqual(5, len(table.summary["dimensions"]))

    def test_loosened(self):
        """Only varying frames widen the tolerance."""
        flat = build_manifold(FLAT_TORUS, GridSpec.uniform(4))
        perturbed = build_manifold(TORUS_PERTURBED, GridSpec.uniform(8), {"epsilon": 0.1})
        self.assertEqual(1e-8, loosened(flat, 1e-8))
        self.assertEqual(1e-8 * LOOSE_FACTOR, loosened(perturbed, 1e-8))
