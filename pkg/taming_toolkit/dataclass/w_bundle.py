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
from dataclasses import field
from typing import Dict
from typing import List

import numpy as np

from taming_toolkit.dataclass.form_field import FormField


@dataclass(frozen=True)
class KernelBasis:
    """
    L2-orthonormal closed anti-invariant forms found in one sector, with the lowest
    eigenvalues of the operator that were inspected.
    """

    sector: str
    forms: List[FormField]
    eigenvalues: np.ndarray

    @property
    def dimension(self) -> int:
        """Number of kernel forms."""
        return len(self.forms)


@dataclass(frozen=True)
class SigmaSolve:
    """One anti-invariant correction: the form, its coordinates and solver diagnostics."""

    form: FormField
    coordinates: np.ndarray
    iterations: int
    relative_residual: float
    kernel_defect: float


@dataclass(frozen=True)
class WBundle:
    """
    Everything built from one mean-zero function f: the two anti-invariant
    corrections, W f, the corrected W~ f and D~ f = d W~ f, with residuals.
    """

    f: np.ndarray
    sigma1: SigmaSolve
    sigma2: SigmaSolve
    w: FormField
    w_tilde: FormField
    d_tilde: FormField
    residuals: Dict[str, float] = field(default_factory=dict)
    defects: Dict[str, float] = field(default_factory=dict)

    def max_residual(self) -> float:
        """Largest posted residual."""
        return max(self.residuals.values(), default=0.0)
