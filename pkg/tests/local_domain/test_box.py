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

from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import TORUS_PERTURBED
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.local_domain.box import BoxDomain

KT_GRID = GridSpec.uniform(4, active=(True, True, True, False))
KT_EXTENTS = [[0.1, 0.6], [0.1, 0.6], [0.1, 0.6]]


class TestBoxDomain(TestCase):
    """
    Unit tests for the Gauss box, its quadrature and its defining function.
    """

    @classmethod
    def setUpClass(cls):
        cls.box = BoxDomain(build_manifold(KODAIRA_THURSTON, KT_GRID), KT_EXTENTS, nodes=6)

    def test_volume(self):
        """The quadrature integrates 1 to the Riemannian volume."""
        self.assertAlmostEqual(0.125, self.box.volume, places=12)
        self.assertAlmostEqual(self.box.volume, float(self.box.integrate(np.ones(self.box.shape))), places=12)

    def test_polynomial_quadrature(self):
        """Gauss nodes integrate low degree polynomials exactly."""
        t = self.box.coordinate(0)
        expected = (0.6**3 - 0.1**3) / 3.0 * 0.25
        self.assertAlmostEqual(expected, float(self.box.integrate(t**2)), places=12)

    def test_derivative(self):
        """Collocation derivatives are exact on polynomials below the node count."""
        x = self.box.coordinate(1)
        y = self.box.coordinate(2)
        np.testing.assert_allclose(self.box.derivative(x**3 * y, 1), 3.0 * x**2 * y, atol=1e-10)
        np.testing.assert_array_equal(np.zeros(self.box.shape), self.box.derivative(x, 3))

    def test_defining_function(self):
        """r < 0 inside, r = 0 and |dr| = 1 on the faces away from the corners."""
        report = self.box.defining_function_report()
        self.assertLess(report["max_r_inside"], 0.0)
        self.assertLess(report["max_abs_r_on_faces"], 1e-12)
        self.assertLess(report["max_dr_defect"], 1e-12)

    def test_boundary_integral(self):
        """The flux of d/dt through the faces of the box."""
        t = self.box.coordinate(0)
        vector = np.array([1.0, 0.0, 0.0, 0.0])
        # int over the t-faces of t * sign, times the 0.5 x 0.5 face area
        self.assertAlmostEqual(0.25 * (0.6 - 0.1), float(self.box.boundary_integral(vector, t)), places=12)

    def test_refined(self):
        """Refinement keeps the box and changes the nodes."""
        refined = self.box.refined(9)
        self.assertEqual((9, 9, 9), refined.shape)
        self.assertEqual(self.box.extents, refined.extents)

    def test_default_extents(self):
        """A centred unit box when no extents are given."""
        box = BoxDomain(build_manifold(FLAT_TORUS, GridSpec.uniform(4)), nodes=4)
        np.testing.assert_allclose(box.center, 0.0)
        self.assertAlmostEqual(1.0, box.volume, places=12)

    @parameterized.expand(
        [
            ("too_few_nodes", KT_EXTENTS, 3),
            ("missing_extent", KT_EXTENTS[:2], 6),
            ("reversed_extent", [[0.6, 0.1], [0.1, 0.6], [0.1, 0.6]], 6),
        ]
    )
    def test_rejects_bad_box(self, _name: str, extents, nodes: int):
        """
        :param _name: Case label
        :param extents: (lo, hi) pairs
        :param nodes: Nodes per axis
        """
        with self.assertRaises(ConfigurationError):
            BoxDomain(build_manifold(KODAIRA_THURSTON, KT_GRID), extents, nodes)

    def test_rejects_varying_frame(self):
        """Boxes need a constant frame."""
        spec = build_manifold(TORUS_PERTURBED, GridSpec.uniform(8), {"epsilon": 0.1})
        with self.assertRaises(ConfigurationError):
            BoxDomain(spec)

    def test_resolution_defect(self):
        """A polynomial is resolved, a steep exponential on four nodes is not."""
        coarse = self.box.refined(4)
        self.assertLess(self.box.resolution_defect(self.box.coordinate(0) ** 2), 1e-10)
        self.assertGreater(coarse.resolution_defect(np.exp(20.0 * coarse.coordinate(0))), 1e-3)
