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
from typing import Sequence

import numpy as np

from taming_toolkit.errors import DegreeError
from taming_toolkit.numerics.multi_index import component_count


@dataclass(frozen=True)
class FormField:
    """
    A differential p-form as component fields in the real coframe eps^I.

    components has shape (C(4, p), *grid_shape); complex components describe complex
    forms such as theta^1 ^ theta^2. A form is real when its components are real.
    """

    degree: int
    components: np.ndarray
    basis: str = "real"

    def __post_init__(self):
        if self.degree < 0 or self.degree > 4:
            raise DegreeError(f"degree {self.degree} outside 0..4")
        if self.components.shape[0] != component_count(self.degree):
            raise DegreeError(
                f"{self.components.shape[0]} components given for a {self.degree}-form, "
                f"expected {component_count(self.degree)}"
            )

    @classmethod
    def zeros(cls, degree: int, shape: Sequence[int], dtype=float) -> "FormField":
        """The zero p-form."""
        return cls(degree, np.zeros((component_count(degree), *shape), dtype=dtype))

    @classmethod
    def scalar(cls, values: np.ndarray) -> "FormField":
        """Wraps a scalar field as a 0-form."""
        return cls(0, np.asarray(values)[np.newaxis])

    @classmethod
    def constant(cls, degree: int, vector: Sequence[complex], shape: Sequence[int]) -> "FormField":
        """Form with constant components."""
        vector = np.asarray(vector)
        view = vector.reshape(vector.shape + (1,) * len(shape))
        return cls(degree, np.array(np.broadcast_to(view, vector.shape + tuple(shape))))

    @property
    def values(self) -> np.ndarray:
        """The single component of a 0-form or 4-form."""
        return self.components[0]

    @property
    def is_real(self) -> bool:
        """True when no component carries an imaginary part."""
        return bool(np.isrealobj(self.components) or not np.any(self.components.imag))

    @property
    def real(self) -> "FormField":
        """Real part."""
        return FormField(self.degree, np.real(self.components).copy(), self.basis)

    @property
    def imag(self) -> "FormField":
        """Imaginary part."""
        return FormField(self.degree, np.imag(self.components).copy(), self.basis)

    def conj(self) -> "FormField":
        """Complex conjugate."""
        return FormField(self.degree, np.conj(self.components), self.basis)

    def _check(self, other: "FormField"):
        if self.degree != other.degree:
            raise DegreeError(f"cannot combine a {self.degree}-form with a {other.degree}-form")

    def __add__(self, other: "FormField") -> "FormField":
        self._check(other)
        return FormField(self.degree, self.components + other.components, self.basis)

    def __sub__(self, other: "FormField") -> "FormField":
        self._check(other)
        return FormField(self.degree, self.components - other.components, self.basis)

    def __neg__(self) -> "FormField":
        return FormField(self.degree, -self.components, self.basis)

    def __mul__(self, factor) -> "FormField":
        # factor is a number or a scalar field on the grid
        return FormField(self.degree, self.components * factor, self.basis)

    __rmul__ = __mul__

    def __truediv__(self, factor) -> "FormField":
        return FormField(self.degree, self.components / factor, self.basis)

    def max_abs(self) -> float:
        """Largest absolute component value."""
        if self.components.size == 0:
            return 0.0
        return float(np.max(np.abs(self.components)))


@dataclass(frozen=True)
class TypeComponents:
    """
    Type decomposition of a 2-form: (2,0), (1,1), (0,2) parts, the trace Lambda_F beta,
    and the split of the (1,1) part into its F-multiple and its primitive remainder.
    """

    part_20: FormField
    part_11: FormField
    part_02: FormField
    trace: np.ndarray
    f_multiple: FormField
    primitive_11: FormField

    @property
    def anti_invariant(self) -> FormField:
        """(2,0) + (0,2) part, the -1 eigenspace of J."""
        return self.part_20 + self.part_02
