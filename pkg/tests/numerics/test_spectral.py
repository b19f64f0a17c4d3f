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
from taming_toolkit.numerics.spectral import SpectralDifferentiator


class TestSpectralDifferentiator(TestCase):
    """
    Unit tests for spectral derivatives on periodic grids.
    """

    def setUp(self):
        self.grid = GridSpec(resolution=(8, 8, 4, 1), periods=(1.0, 2.0, 1.0, 1.0), active=(True, True, True, False))
        self.differentiator = SpectralDifferentiator(self.grid)

    @parameterized.expand([(0, 1.0), (1, 2.0), (2, 1.0)])
    def test_derivative_of_sine_is_exact(self, coordinate: int, period: float):
        """
        d/dc sin(2 pi c / L) = (2 pi / L) cos(2 pi c / L) to round-off.

        :param coordinate: Active coordinate
        :param period: Its period
        """
        phase = 2.0 * np.pi * self.grid.coordinate(coordinate) / period
        derivative = self.differentiator.derivative(np.sin(phase), coordinate)
        np.testing.assert_allclose(derivative, 2.0 * np.pi / period * np.cos(phase), atol=1e-12)

    def test_inactive_coordinate_derivative_vanishes(self):
        """Fields do not depend on z."""
        field = np.cos(2.0 * np.pi * self.grid.coordinate(0))
        np.testing.assert_array_equal(np.zeros(self.grid.shape), self.differentiator.derivative(field, 3))

    def test_dealias_removes_nyquist(self):
        """The Nyquist mode cos(pi N t) is removed, a resolved mode survives."""
        resolved = self.differentiator.fourier_mode((1, 1, 0))
        nyquist = self.differentiator.fourier_mode((4, 0, 0))
        np.testing.assert_allclose(self.differentiator.dealias(resolved + nyquist), resolved, atol=1e-12)

    def test_smooth_inverts_shifted_laplacian(self):
        """(1 - Laplacian)^-1 scales a Fourier mode by 1 / (1 + |2 pi k / L|^2)."""
        mode = self.differentiator.fourier_mode((1, 0, 0), "sin")
        expected = mode / (1.0 + (2.0 * np.pi) ** 2)
        np.testing.assert_allclose(self.differentiator.smooth(mode), expected, atol=1e-12)
