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
from taming_toolkit.errors import ResolutionError
from taming_toolkit.numerics.finite_difference import FiniteDifferenceDifferentiator


def _sine_error(resolution: int, period: float) -> float:
    grid = GridSpec(
        resolution=(resolution, 1, 1, 1), periods=(period, 1.0, 1.0, 1.0), active=(True, False, False, False)
    )
    phase = 2.0 * np.pi * grid.coordinate(0) / period
    derivative = FiniteDifferenceDifferentiator(grid).derivative(np.sin(phase), 0)
    return float(np.max(np.abs(derivative - 2.0 * np.pi / period * np.cos(phase))))


class TestFiniteDifferenceDifferentiator(TestCase):
    """
    Unit tests for the fourth-order difference oracle.
    """

    @parameterized.expand([(1.0,), (2.0,)])
    def test_fourth_order_convergence(self, period: float):
        """
        Halving the spacing divides the error on sin(2 pi t / L) by about 16.

        :param period: Period of the axis
        """
        coarse, fine = _sine_error(16, period), _sine_error(32, period)
        self.assertLess(fine, 1e-3)
        self.assertAlmostEqual(4.0, np.log2(coarse / fine), delta=0.2)

    def test_constant_and_inactive_coordinate(self):
        """A constant field has zero derivative and inactive coordinates give zero."""
        grid = GridSpec(resolution=(8, 8, 1, 1), periods=(1.0, 1.0, 1.0, 1.0), active=(True, True, False, False))
        differentiator = FiniteDifferenceDifferentiator(grid)
        np.testing.assert_allclose(differentiator.derivative(np.full(grid.shape, 3.0), 1), 0.0, atol=1e-12)
        np.testing.assert_array_equal(np.zeros(grid.shape), differentiator.derivative(np.ones(grid.shape), 3))

    def test_short_axis(self):
        """The five-point stencil needs five points."""
        with self.assertRaises(ResolutionError):
            FiniteDifferenceDifferentiator(GridSpec.uniform(4, active=(True, True, False, False)))
