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
Records of the truncated Fourier-Galerkin machinery.
"""

from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

import numpy as np

from taming_toolkit.dataclass.form_field import FormField


@dataclass(frozen=True)
class GalerkinSpace:
    """
    A finite family of p-forms stacked as components (n, C(4,p), *grid_shape).
    Spaces built by the assembler are L2-orthonormal.
    """

    degree: int
    components: np.ndarray
    label: str = ""

    @property
    def dimension(self) -> int:
        """Number of basis forms."""
        return int(self.components.shape[0])

    def form(self, index: int) -> FormField:
        """The index-th basis form."""
        return FormField(self.degree, self.components[index])

    def combine(self, coefficients: np.ndarray) -> FormField:
        """sum_i coefficients[i] form(i)"""
        if self.dimension == 0:
            return FormField.zeros(self.degree, self.components.shape[2:])
        return FormField(self.degree, np.tensordot(coefficients, self.components, axes=(0, 0)))


@dataclass(frozen=True)
class LinearMapMatrix:
    """
    Dense matrix of a truncated operator. With an implicit codomain the rows are
    coordinates in an orthonormal basis of the operator's image, so only norms of
    images are meaningful.
    """

    operator_id: str
    matrix: np.ndarray
    implicit_codomain: bool = False

    @property
    def shape(self):
        """(codomain dimension, domain dimension)"""
        return self.matrix.shape

    def singular_values(self) -> np.ndarray:
        """Singular values in decreasing order."""
        if self.matrix.size == 0:
            return np.zeros(0)
        return np.linalg.svd(self.matrix, compute_uv=False)


@dataclass(frozen=True)
class TruncatedComplex:
    """
    H1 --T--> H2 --S--> H3 on truncated spaces. T rows and S columns are coordinates
    in the orthonormal basis of H2 (the space V of the estimate).
    """

    cutoff: int
    operator_id: str
    t_map: LinearMapMatrix
    s_map: LinearMapMatrix
    domain: Optional[GalerkinSpace] = None
    middle: Optional[GalerkinSpace] = None
    t_images: Optional[GalerkinSpace] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_matrices(cls, t_matrix: np.ndarray, s_matrix: np.ndarray, operator_id: str = "matrix"):
        """A purely algebraic complex, used for the matrix-level checks."""
        composite = float(np.linalg.norm(s_matrix @ t_matrix, 2)) if s_matrix.size and t_matrix.size else 0.0
        return cls(
            cutoff=0,
            operator_id=operator_id,
            t_map=LinearMapMatrix("T", np.asarray(t_matrix, dtype=float)),
            s_map=LinearMapMatrix("S", np.asarray(s_matrix, dtype=float), implicit_codomain=True),
            diagnostics={"composite_norm": composite},
        )

    @property
    def t_matrix(self) -> np.ndarray:
        """T as (dim H2, dim H1)."""
        return self.t_map.matrix

    @property
    def s_matrix(self) -> np.ndarray:
        """S as (dim H3, dim H2)."""
        return self.s_map.matrix

    @property
    def dimensions(self) -> Dict[str, int]:
        """Sizes of the three spaces."""
        return {"H1": self.t_matrix.shape[1], "H2": self.t_matrix.shape[0], "H3": self.s_matrix.shape[0]}


@dataclass(frozen=True)
class EstimateReport:
    """
    Best constant of ||h|| <= C (||T* h|| + ||S h||) on H2. constant is the
    quadratic-form constant; the constant of the sum of norms lies in
    [constant_sum_lower, constant_sum_upper].
    """

    constant: float
    constant_sum_lower: float
    constant_sum_upper: float
    smallest_eigenvalue: float
    minimizer: np.ndarray
    degenerate: bool = False
    cutoff: int = 0
    trend: List[Dict[str, float]] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """JSON friendly view."""
        return {
            "constant": self.constant,
            "constant_sum_bracket": [self.constant_sum_lower, self.constant_sum_upper],
            "smallest_eigenvalue": self.smallest_eigenvalue,
            "degenerate": self.degenerate,
            "cutoff": self.cutoff,
            "trend": list(self.trend),
            "provenance": dict(self.provenance),
        }


@dataclass(frozen=True)
class SolveReport:
    """
    Outcome of a solver run: the solution coordinates and every posted number.
    """

    name: str
    solution: np.ndarray
    constant: float = 0.0
    cutoff: int = 0
    residuals: Dict[str, float] = field(default_factory=dict)
    defects: Dict[str, float] = field(default_factory=dict)
    bounds: Dict[str, float] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """JSON friendly view without the solution array."""
        return {
            "name": self.name,
            "constant": self.constant,
            "cutoff": self.cutoff,
            "residuals": dict(self.residuals),
            "defects": dict(self.defects),
            "bounds": dict(self.bounds),
            "provenance": dict(self.provenance),
            "timings": dict(self.timings),
        }
