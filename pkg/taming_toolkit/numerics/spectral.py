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
Fourier differentiation on the periodic coordinate cell.

Derivatives are Fourier multipliers 2*pi*i*k/L with the Nyquist wavenumber zeroed,
which keeps every discrete derivative real and skew-adjoint for the plain grid sum.
"""

import logging
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.fft

from taming_toolkit.dataclass.grid_spec import GridSpec


class SpectralDifferentiator:
    """
    Applies coordinate derivatives and the dealiasing projection to fields
    sampled on a GridSpec. Fields have shape grid.shape on their trailing axes.
    """

    def __init__(self, grid: GridSpec):
        """
        :param grid: The grid the fields live on
        """
        self.grid = grid
        self._logger = logging.getLogger(self.__class__.__name__)

    @cached_property
    def wavenumbers(self) -> Tuple[np.ndarray, ...]:
        """
        Integer wavenumbers per active axis in FFT order, Nyquist entry set to 0.
        """
        numbers = []
        for count in self.grid.active_resolution:
            freq = np.rint(scipy.fft.fftfreq(count, d=1.0 / count)).astype(int)
            if count % 2 == 0:
                freq[count // 2] = 0
            numbers.append(freq)
        return tuple(numbers)

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """Boolean array over Fourier space, True where some axis sits at Nyquist."""
        mask = np.zeros(self.grid.shape, dtype=bool)
        for axis, count in enumerate(self.grid.active_resolution):
            index = [slice(None)] * len(self.grid.shape)
            index[axis] = count // 2
            mask[tuple(index)] = True
        return mask

    def derivative(self, field: np.ndarray, coordinate: int) -> np.ndarray:
        """
        :param field: Array whose trailing axes are the grid axes
        :param coordinate: Coordinate index 0..3
        :return: The spectral partial derivative, zero for inactive coordinates
        """
        axis = self.grid.axis_of(coordinate)
        if axis is None:
            return np.zeros_like(field)
        axis = axis - len(self.grid.shape)
        period = self.grid.periods[coordinate]
        multiplier = 2j * np.pi * self.wavenumbers[self.grid.axis_of(coordinate)] / period
        shape = [1] * field.ndim
        shape[axis] = multiplier.size
        spectrum = scipy.fft.fft(field, axis=axis) * multiplier.reshape(shape)
        result = scipy.fft.ifft(spectrum, axis=axis)
        if np.isrealobj(field):
            return result.real
        return result

    def dealias(self, field: np.ndarray) -> np.ndarray:
        """Removes every Fourier mode carrying a Nyquist component."""
        axes = tuple(range(-len(self.grid.shape), 0))
        spectrum = scipy.fft.fftn(field, axes=axes)
        spectrum[..., self.nyquist_mask] = 0.0
        result = scipy.fft.ifftn(spectrum, axes=axes)
        if np.isrealobj(field):
            return result.real
        return result

    @cached_property
    def laplacian_symbol(self) -> np.ndarray:
        """sum over active axes of (2 pi k / L)^2 on the FFT grid."""
        symbol = np.zeros(self.grid.shape)
        for axis, coordinate in enumerate(self.grid.active_coordinates):
            shape = [1] * len(self.grid.shape)
            shape[axis] = self.grid.active_resolution[axis]
            scaled = 2.0 * np.pi * self.wavenumbers[axis] / self.grid.periods[coordinate]
            symbol = symbol + (scaled**2).reshape(shape)
        return symbol

    def smooth(self, field: np.ndarray, shift: float = 1.0) -> np.ndarray:
        """Applies (shift - Laplacian)^-1 along the grid axes."""
        axes = tuple(range(-len(self.grid.shape), 0))
        spectrum = scipy.fft.fftn(field, axes=axes) / (shift + self.laplacian_symbol)
        result = scipy.fft.ifftn(spectrum, axes=axes)
        if np.isrealobj(field):
            return result.real
        return result

    def fourier_mode(self, wavevector: Tuple[int, ...], kind: str = "cos") -> np.ndarray:
        """
        :param wavevector: Integer frequencies per active axis
        :param kind: "cos" or "sin"
        :return: cos or sin of 2*pi*sum(k_a x_a / L_a) on the grid
        """
        phase = np.zeros(self.grid.shape)
        for axis, coordinate in enumerate(self.grid.active_coordinates):
            period = self.grid.periods[coordinate]
            phase = phase + 2.0 * np.pi * wavevector[axis] * self.grid.coordinate(coordinate) / period
        if kind == "cos":
            return np.cos(phase)
        return np.sin(phase)

