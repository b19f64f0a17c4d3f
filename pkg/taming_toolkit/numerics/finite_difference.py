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

"""
Fourth-order central differences on the periodic grid, used only to cross-check the
spectral derivatives.
"""

import dataclasses

import numpy as np

from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ResolutionError

# f'(x) ~ (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / 12h
STENCIL = ((2, -1.0 / 12.0), (1, 8.0 / 12.0), (-1, -8.0 / 12.0), (-2, 1.0 / 12.0))
MIN_POINTS = 5


class FiniteDifferenceDifferentiator:
    """
    Drop-in for the derivative of SpectralDifferentiator, with error O(h^4).
    """

    def __init__(self, grid: GridSpec):
        """
        :param grid: The grid the fields live on
        :raises ResolutionError: when an active axis is too short for the stencil
        """
        if min(grid.active_resolution, default=MIN_POINTS) < MIN_POINTS:
            raise ResolutionError(f"the difference stencil needs {MIN_POINTS} points per active axis")
        self.grid = grid

    def derivative(self, field: np.ndarray, coordinate: int) -> np.ndarray:
        """
        :param field: Array whose trailing axes are the grid axes
        :param coordinate: Coordinate index 0..3
        :return: The difference quotient, zero for inactive coordinates
        """
        axis = self.grid.axis_of(coordinate)
        if axis is None:
            return np.zeros_like(field)
        axis = axis - len(self.grid.shape)
        spacing = self.grid.periods[coordinate] / self.grid.resolution[coordinate]
        result = np.zeros_like(field)
        for shift, weight in STENCIL:
            # roll by -s moves f(x + s h) onto x
            result = result + weight * np.roll(field, -shift, axis=axis)
        return result / spacing


def with_finite_differences(spec: ManifoldSpec) -> ManifoldSpec:
    """The same manifold with every frame derivative taken by finite differences."""
    return dataclasses.replace(spec, differentiator=FiniteDifferenceDifferentiator(spec.grid))
