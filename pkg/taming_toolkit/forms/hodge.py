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
Hodge decomposition of 1-forms: exact + harmonic + coexact.
"""

import logging
from functools import cached_property
from typing import List
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.errors import DegreeError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.numerics.krylov import solve_symmetric
from taming_toolkit.numerics.multi_index import basis_vector

HARMONIC_RANK_TOLERANCE = 1e-10


class HodgeDecomposer:
    """
    Splits 1-forms on a spec. The exact part is d u with d*d u = d* a (scalar CG on
    the dealiased, mean-zero sector); harmonic forms are closed coordinate coframe
    forms minus their exact parts.
    """

    def __init__(self, calculus: ExteriorCalculus, rtol: float = 1e-12, max_iterations: int = 2000):
        """
        :param calculus: Calculus of the manifold
        :param rtol: CG tolerance for the scalar Laplacian
        :param max_iterations: CG iteration cap
        """
        self.calculus = calculus
        self.spec = calculus.spec
        self.rtol = rtol
        self.max_iterations = max_iterations
        self._logger = logging.getLogger(self.__class__.__name__)

    def solve_laplacian(self, rhs: np.ndarray) -> np.ndarray:
        """
        Mean-zero solution of d*d u = rhs for a real rhs integrating to zero against vol_g.
        """
        spec = self.spec
        differentiator = spec.differentiator
        root = np.sqrt(spec.volume_density)
        shape = spec.shape

        def apply(flat: np.ndarray) -> np.ndarray:
            values = differentiator.dealias(flat.reshape(shape) / root)
            laplacian = self.calculus.d_star(self.calculus.d(FormField.scalar(values))).values
            return differentiator.dealias(root * laplacian).ravel()

        target = differentiator.dealias(root * rhs)
        result = solve_symmetric(apply, target.ravel(), self.rtol, self.max_iterations, label="scalar laplacian")
        values = differentiator.dealias(result.solution.reshape(shape) / root)
        mean = spec.integrate(spec.volume_density * values) / spec.integrate(spec.volume_density)
        return values - mean

    @cached_property
    def harmonic_basis(self) -> List[FormField]:
        """L2-orthonormal harmonic 1-forms."""
        shape = self.spec.shape
        candidates = []
        for index in range(4):
            form = FormField.constant(1, basis_vector(1, (index,)), shape)
            if self.calculus.d(form).max_abs() > HARMONIC_RANK_TOLERANCE:
                continue
            candidates.append(form - self.exact_part(form))
        if not candidates:
            return []
        gram = np.array([[np.real(self.calculus.inner(a, b)) for b in candidates] for a in candidates])
        values, vectors = np.linalg.eigh(gram)
        keep = values > HARMONIC_RANK_TOLERANCE * max(values.max(), 1.0)
        basis = []
        for value, vector in zip(values[keep], vectors[:, keep].T):
            terms = (candidate * (weight / np.sqrt(value)) for weight, candidate in zip(vector, candidates))
            combination = sum(terms, FormField.zeros(1, shape))
            basis.append(combination)
        self._logger.debug("%d harmonic 1-forms on %s", len(basis), self.spec.name)
        return basis

    def exact_part(self, alpha: FormField) -> FormField:
        """d u with u the mean-zero solution of d*d u = d* alpha."""
        if alpha.degree != 1:
            raise DegreeError("Hodge decomposition is implemented for 1-forms")
        rhs = self.calculus.d_star(alpha).values
        if np.iscomplexobj(rhs):
            real = self.solve_laplacian(rhs.real)
            imag = self.solve_laplacian(rhs.imag)
            return self.calculus.d(FormField.scalar(real + 1j * imag))
        return self.calculus.d(FormField.scalar(self.solve_laplacian(rhs)))

    def harmonic_part(self, alpha: FormField) -> FormField:
        """Orthogonal projection onto the harmonic basis."""
        result = FormField.zeros(1, self.spec.shape, dtype=alpha.components.dtype)
        for form in self.harmonic_basis:
            result = result + form * self.calculus.inner(alpha, form)
        return result

    def decompose(self, alpha: FormField) -> Tuple[FormField, FormField, FormField]:
        """
        :return: (exact, harmonic, coexact) with alpha = exact + harmonic + coexact
        """
        exact = self.exact_part(alpha)
        harmonic = self.harmonic_part(alpha - exact)
        coexact = alpha - exact - harmonic
        return exact, harmonic, coexact
