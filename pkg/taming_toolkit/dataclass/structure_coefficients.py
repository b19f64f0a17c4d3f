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

# frame slots 0..3 hold e_1, e_2, conj e_1, conj e_2
FRAME_LABELS = ("e1", "e2", "e1b", "e2b")


def conjugate_slot(slot: int) -> int:
    """Frame slot of the conjugate vector."""
    return (slot + 2) % 4


@dataclass(frozen=True)
class StructureCoefficients:
    """
    Bracket data of the complex frame phi_A = (e_1, e_2, conj e_1, conj e_2).

    bracket[C, A, B] is the phi_C coefficient of [phi_A, phi_B]. The named blocks are
    the structure-equation coefficients in index order [s, k, j]:
    mixed = C^s_{k jbar}, holomorphic = C^s_{kj}, anti_holomorphic = N^s_{kbar jbar}.
    trace[j] = sum_k B^{jbar}_{k kbar}; divergence[A] = div(phi_A) against vol_g.
    """

    bracket: np.ndarray
    mixed: np.ndarray
    holomorphic: np.ndarray
    anti_holomorphic: np.ndarray
    trace: np.ndarray
    divergence: np.ndarray

    def max_abs(self) -> float:
        """Largest bracket coefficient."""
        return float(np.max(np.abs(self.bracket)))


@dataclass(frozen=True)
class CommutatorCheck:
    """
    (delta_i conj e_j - conj e_j delta_i) u by composition and by expansion.
    """

    composed: np.ndarray
    expanded: np.ndarray
    residual: float
    first_order_magnitude: float
    hessian_magnitude: float
