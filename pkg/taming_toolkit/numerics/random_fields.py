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
Seeded band-limited random fields on a spec's grid.

A field of band b is a Gaussian combination of the real Fourier modes with
0 < |k|_inf <= b on the active axes, so it is resolved exactly by the spectral
derivatives as long as 2 b stays below the smallest active resolution.
"""

import itertools
from typing import List
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ResolutionError
from taming_toolkit.numerics.multi_index import component_count

DEFAULT_BAND = 2


def band_wavevectors(spec: ManifoldSpec, band: int) -> List[Tuple[int, ...]]:
    """One representative of each pair +-k with 0 < |k|_inf <= band."""
    if 2 * band >= min(spec.grid.active_resolution):
        raise ResolutionError(f"band {band} needs more than {min(spec.grid.active_resolution)} points")
    count = len(spec.grid.active_coordinates)
    vectors = []
    for vector in itertools.product(range(-band, band + 1), repeat=count):
        nonzero = [entry for entry in vector if entry]
        if nonzero and nonzero[0] > 0:
            vectors.append(vector)
    return vectors


def random_function(
    spec: ManifoldSpec, rng: np.random.Generator, band: int = DEFAULT_BAND, mean: float = 0.0
) -> np.ndarray:
    """
    :param spec: The manifold whose grid carries the field
    :param rng: Seeded generator; the same seed gives the same field
    :param band: Largest integer frequency per axis
    :param mean: Constant added to the field
    :return: Real scalar field with amplitudes decaying like 1 / (1 + |k|^2)
    """
    differentiator = spec.differentiator
    values = np.full(spec.shape, float(mean))
    for vector in band_wavevectors(spec, band):
        decay = 1.0 / (1.0 + float(np.dot(vector, vector)))
        cos_weight, sin_weight = rng.standard_normal(2) * decay
        values = values + cos_weight * differentiator.fourier_mode(vector, "cos")
        values = values + sin_weight * differentiator.fourier_mode(vector, "sin")
    return values


def random_form(
    spec: ManifoldSpec, rng: np.random.Generator, degree: int, band: int = DEFAULT_BAND, with_constant: bool = True
) -> FormField:
    """Real p-form with independent band-limited components."""
    components = np.stack(
        [
            random_function(spec, rng, band, float(rng.standard_normal()) if with_constant else 0.0)
            for _ in range(component_count(degree))
        ]
    )
    return FormField(degree, components)


def random_functions(spec: ManifoldSpec, seed: int, count: int, band: int = DEFAULT_BAND) -> List[np.ndarray]:
    """count mean-zero scalar fields drawn from one seeded generator."""
    rng = np.random.default_rng(seed)
    return [random_function(spec, rng, band) for _ in range(count)]
