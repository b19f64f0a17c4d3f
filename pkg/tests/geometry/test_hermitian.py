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

from taming_toolkit.errors import TamingViolationError
from taming_toolkit.geometry.catalog import standard_j
from taming_toolkit.geometry.catalog import standard_omega
from taming_toolkit.geometry.hermitian import build_hermitian_from_taming
from taming_toolkit.geometry.hermitian import j_act_two_form
from taming_toolkit.geometry.hermitian import taming_margins
from taming_toolkit.numerics import pointwise
from taming_toolkit.numerics.multi_index import basis_vector

SHAPE = (2, 3)


def _two_form(components: np.ndarray) -> np.ndarray:
    return np.array(np.broadcast_to(components.reshape(6, 1, 1), (6, *SHAPE)))


class TestHermitian(TestCase):
    """
    Unit tests for the Hermitian data of a taming pair.
    """

    def setUp(self):
        self.almost_complex = pointwise.constant_field(standard_j(), SHAPE)

    def test_compatible_pair(self):
        """The standard pair is compatible: omega is its own (1,1) part and g is the identity."""
        omega = _two_form(standard_omega())
        data = build_hermitian_from_taming(self.almost_complex, omega)
        np.testing.assert_allclose(omega, data.fundamental_form, atol=1e-14)
        np.testing.assert_allclose(np.zeros_like(omega), data.omega_minus, atol=1e-14)
        np.testing.assert_allclose(pointwise.constant_field(np.eye(4), SHAPE), data.metric, atol=1e-14)
        self.assertAlmostEqual(1.0, data.taming_margin)

    @parameterized.expand([((0, 2), 0.3), ((1, 3), -0.2), ((0, 3), 0.4)])
    def test_tamed_pair_splits(self, pair, weight: float):
        """
        Adding a small constant 2-form keeps the taming and splits into J-invariant and anti-invariant parts.

        :param pair: Coordinate pair of the added 2-form
        :param weight: Its coefficient
        """
        omega = _two_form(standard_omega() + weight * basis_vector(2, pair))
        data = build_hermitian_from_taming(self.almost_complex, omega)
        fundamental, minus = data.fundamental_form, data.omega_minus
        np.testing.assert_allclose(omega, fundamental + minus, atol=1e-14)
        np.testing.assert_allclose(fundamental, j_act_two_form(self.almost_complex, fundamental), atol=1e-14)
        np.testing.assert_allclose(-minus, j_act_two_form(self.almost_complex, minus), atol=1e-14)
        np.testing.assert_allclose(data.metric, pointwise.transpose(data.metric), atol=1e-14)
        self.assertGreater(float(np.min(pointwise.min_eigenvalue(data.metric))), 0.0)
        self.assertGreater(data.taming_margin, 0.0)

    def test_sampled_margin_bounds_exact_margin(self):
        """The direction sample never undercuts the pointwise eigenvalue margin."""
        omega = _two_form(standard_omega() + 0.5 * basis_vector(2, (0, 2)))
        margin, sampled = taming_margins(self.almost_complex, omega)
        self.assertGreaterEqual(sampled, margin - 1e-12)

    @parameterized.expand([(-1.0,), (0.0,)])
    def test_not_tamed(self, scale: float):
        """
        A non-positive multiple of the standard form does not tame J.

        :param scale: Multiple of the standard form
        """
        with self.assertRaises(TamingViolationError):
            build_hermitian_from_taming(self.almost_complex, _two_form(scale * standard_omega()))
