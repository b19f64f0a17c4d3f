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

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WeightedField:
    """
    A real 1-form a = u + conj(u) on a box, u = u_1 conj(theta^1) + u_2 conj(theta^2),
    sampled on the box nodes together with the weight phi.
    """

    components: np.ndarray
    weight: np.ndarray
    recipe: str = ""

    @property
    def u1(self) -> np.ndarray:
        """Coefficient of conj(theta^1)."""
        return self.components[0]

    @property
    def u2(self) -> np.ndarray:
        """Coefficient of conj(theta^2)."""
        return self.components[1]

    def conj(self) -> "WeightedField":
        """The field with conjugated coefficients and the same weight."""
        return WeightedField(np.conj(self.components), self.weight, self.recipe)

    def scaled(self, factor: complex) -> "WeightedField":
        """factor * u"""
        return WeightedField(factor * self.components, self.weight, self.recipe)

    def max_abs(self) -> float:
        """Largest coefficient modulus."""
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0
