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
Exterior calculus on frame-component fields of a ManifoldSpec.

d uses spectral derivatives of the components plus the algebraic d eps^I terms of the
invariant coframe. d* is the exact adjoint of d for the discrete L2 product
<alpha, beta> = w * sum(mu * alpha^T G_p conj(beta)), so adjointness holds to roundoff
on every spec.
"""

import logging
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.form_field import TypeComponents
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import DegreeError
from taming_toolkit.numerics import pointwise
from taming_toolkit.numerics.multi_index import DIMENSION
from taming_toolkit.numerics.multi_index import complement_pairing
from taming_toolkit.numerics.multi_index import wedge_tensor

# positions of theta^A ^ theta^B among the six ordered pairs of (e1, e2, conj e1, conj e2)
TYPE_20 = (0,)
TYPE_11 = (1, 2, 3, 4)
TYPE_02 = (5,)


class ExteriorCalculus:
    """
    Algebraic and differential operations on FormFields over one ManifoldSpec.
    """

    def __init__(self, spec: ManifoldSpec):
        """
        :param spec: The manifold whose coframe, metric and J are used
        """
        self.spec = spec
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # algebra

    def wedge(self, alpha: FormField, beta: FormField) -> FormField:
        """
        :return: alpha ^ beta
        :raises DegreeError: when the degrees add up to more than 4
        """
        degree = alpha.degree + beta.degree
        if degree > DIMENSION:
            raise DegreeError(f"wedge of a {alpha.degree}-form and a {beta.degree}-form exceeds degree {DIMENSION}")
        tensor = wedge_tensor(alpha.degree, beta.degree)
        return FormField(degree, np.einsum("ijk,i...,j...->k...", tensor, alpha.components, beta.components))

    def pointwise_inner(self, alpha: FormField, beta: FormField) -> np.ndarray:
        """Complex-bilinear metric pairing g(alpha, beta) as a scalar field."""
        self._same_degree(alpha, beta)
        gram = self.spec.metric_compounds[alpha.degree]
        return np.einsum("i...,ij...,j...->...", alpha.components, gram, beta.components)

    def inner(self, alpha: FormField, beta: FormField) -> complex | float:
        """L2 product, conjugate-linear in beta."""
        density = self.spec.volume_density * self.pointwise_inner(alpha, beta.conj())
        return self.spec.integrate(density)

    def norm(self, alpha: FormField) -> float:
        """L2 norm."""
        return float(np.sqrt(max(np.real(self.inner(alpha, alpha)), 0.0)))

    def volume_form(self) -> FormField:
        """vol_g = mu eps^0123"""
        return FormField(4, self.spec.volume_density[np.newaxis].astype(float))

    def integrate_top(self, eta: FormField) -> complex | float:
        """Integral of a 4-form over the cell."""
        if eta.degree != DIMENSION:
            raise DegreeError(f"only 4-forms integrate, got degree {eta.degree}")
        return self.spec.integrate(eta.values)

    def hodge_star(self, alpha: FormField) -> FormField:
        """
        alpha ^ *beta = g(alpha, beta) vol_g, so ** = (-1)^(p(4-p)).
        """
        degree = alpha.degree
        raised = pointwise.apply(self.spec.metric_compounds[degree], alpha.components)
        pairing = complement_pairing(degree)
        components = np.einsum("ik,i...->k...", pairing, raised) * self.spec.volume_density
        return FormField(DIMENSION - degree, components)

    def j_act(self, psi: FormField) -> FormField:
        """(J psi)(v_1, .., v_p) = psi(J v_1, .., J v_p)"""
        return FormField(
            psi.degree, pointwise.apply_transpose(self.spec.j_compounds[psi.degree], psi.components), psi.basis
        )

    def lambda_contract(self, beta: FormField) -> np.ndarray:
        """Lambda_F beta = g(beta, F) pointwise, so Lambda_F F = 2."""
        return self.pointwise_inner(beta, self.fundamental_form())

    def fundamental_form(self) -> FormField:
        """F as a FormField."""
        return FormField(2, self.spec.fundamental_form)

    def omega(self) -> FormField:
        """The taming form."""
        return FormField(2, self.spec.omega)

    def omega_minus(self) -> FormField:
        """omega - F"""
        return FormField(2, self.spec.omega_minus)

    def coframe_form(self, index: int) -> FormField:
        """theta^1, theta^2, conj theta^1, conj theta^2 (index 0..3) as complex 1-forms."""
        return FormField(1, self.spec.frame.coframe[index].copy())

    # ------------------------------------------------------------------
    # decompositions

    def type_coefficients(self, beta: FormField) -> np.ndarray:
        """
        c_AB = beta(phi_A, phi_B) for the six pairs A < B of (e1, e2, conj e1, conj e2),
        so that beta = sum c_AB theta^A ^ theta^B.
        """
        self._require_degree(beta, 2)
        return pointwise.apply_transpose(self.spec.frame.frame_compound2, beta.components)

    def from_type_coefficients(self, coefficients: np.ndarray) -> FormField:
        """Inverse of type_coefficients."""
        return FormField(2, pointwise.apply_transpose(self.spec.frame.coframe_compound2, coefficients))

    def _type_part(self, coefficients: np.ndarray, positions: Tuple[int, ...]) -> FormField:
        masked = np.zeros_like(coefficients)
        for position in positions:
            masked[position] = coefficients[position]
        return self.from_type_coefficients(masked)

    def split_type(self, beta: FormField) -> TypeComponents:
        """(2,0), (1,1), (0,2) parts, the trace and the primitive (1,1) remainder."""
        coefficients = self.type_coefficients(beta)
        part_11 = self._type_part(coefficients, TYPE_11)
        trace = self.lambda_contract(beta)
        f_multiple = self.fundamental_form() * (0.5 * trace)
        if beta.is_real:
            part_11 = part_11.real
            f_multiple = f_multiple.real
        return TypeComponents(
            part_20=self._type_part(coefficients, TYPE_20),
            part_11=part_11,
            part_02=self._type_part(coefficients, TYPE_02),
            trace=trace,
            f_multiple=f_multiple,
            primitive_11=part_11 - f_multiple,
        )

    def project_plus_j(self, beta: FormField) -> FormField:
        """J-invariant part (1 + J) beta / 2."""
        self._require_degree(beta, 2)
        return (beta + self.j_act(beta)) * 0.5

    def project_minus_j(self, beta: FormField) -> FormField:
        """J-anti-invariant part (1 - J) beta / 2."""
        self._require_degree(beta, 2)
        return (beta - self.j_act(beta)) * 0.5

    def split_pm(self, beta: FormField) -> Tuple[FormField, FormField]:
        """Self-dual and anti-self-dual parts."""
        self._require_degree(beta, 2)
        star = self.hodge_star(beta)
        return (beta + star) * 0.5, (beta - star) * 0.5

    # ------------------------------------------------------------------
    # derivatives

    def d(self, alpha: FormField) -> FormField:
        """Exterior derivative."""
        degree = alpha.degree
        if degree >= DIMENSION:
            raise DegreeError("d of a 4-form is zero-dimensional")
        selector = wedge_tensor(1, degree)
        components = pointwise.apply_transpose(self.spec.structure_matrices[degree], alpha.components)
        for index in range(DIMENSION):
            if not selector[index].any():
                continue
            derivative = self.spec.derivative(alpha.components, index)
            components = components + np.einsum("ik,i...->k...", selector[index], derivative)
        return FormField(degree + 1, components)

    def d_transpose(self, gamma: FormField) -> FormField:
        """Transpose of d for the plain component-and-grid sum."""
        degree = gamma.degree - 1
        if degree < 0:
            raise DegreeError("no transpose of d into negative degree")
        selector = wedge_tensor(1, degree)
        components = pointwise.apply(self.spec.structure_matrices[degree], gamma.components)
        for index in range(DIMENSION):
            if not selector[index].any():
                continue
            gathered = np.einsum("ik,k...->i...", selector[index], gamma.components)
            components = components - self.spec.derivative(gathered, index)
        return FormField(degree, components)

    def d_star(self, beta: FormField) -> FormField:
        """
        Codifferential: d* = mu^-1 G_(p-1)^-1 d^T (mu G_p beta).

        :param beta: Form of degree p >= 1
        """
        degree = beta.degree
        if degree < 1:
            raise DegreeError("d* of a function is not defined")
        density = self.spec.volume_density
        weighted = pointwise.apply(self.spec.metric_compounds[degree], beta.components) * density
        transposed = self.d_transpose(FormField(degree, weighted))
        lowered = pointwise.apply(self.spec.inverse_metric_compounds[degree - 1], transposed.components)
        return FormField(degree - 1, lowered / density)

    def d_pm_j(self, alpha: FormField) -> Tuple[FormField, FormField]:
        """(d+_J a, d-_J a): the J-invariant and J-anti-invariant parts of da."""
        self._require_degree(alpha, 1)
        derivative = self.d(alpha)
        return self.project_plus_j(derivative), self.project_minus_j(derivative)

    def d_plus(self, alpha: FormField) -> FormField:
        """(da + *da) / 2"""
        self._require_degree(alpha, 1)
        return self.split_pm(self.d(alpha))[0]

    def d_minus(self, alpha: FormField) -> FormField:
        """(da - *da) / 2"""
        self._require_degree(alpha, 1)
        return self.split_pm(self.d(alpha))[1]

    def d_plus_decomposition_residual(self, alpha: FormField) -> float:
        """
        Relative pointwise residual of d+ a = d-_J a + (Lambda_F d+_J a) F / 2.
        """
        plus_j, minus_j = self.d_pm_j(alpha)
        rebuilt = minus_j + self.fundamental_form() * (0.5 * self.lambda_contract(plus_j))
        left = self.d_plus(alpha)
        scale = max(left.max_abs(), self.d(alpha).max_abs(), 1e-300)
        return (left - rebuilt).max_abs() / scale

    def leibniz_defect(self, alpha: FormField, beta: FormField) -> float:
        """Relative defect of d(a ^ b) = da ^ b + (-1)^p a ^ db."""
        left = self.d(self.wedge(alpha, beta))
        sign = -1.0 if alpha.degree % 2 else 1.0
        right = self.wedge(self.d(alpha), beta) + self.wedge(alpha, self.d(beta)) * sign
        scale = max(left.max_abs(), right.max_abs(), 1e-300)
        return (left - right).max_abs() / scale

    def anti_self_dual_energy_gap(self, alpha: FormField) -> Tuple[float, float]:
        """
        :return: (|d+ a|^2 - |d- a|^2, integral of da ^ da); both vanish on a closed manifold
        """
        derivative = self.d(alpha)
        plus, minus = self.split_pm(derivative)
        gap = self.norm(plus) ** 2 - self.norm(minus) ** 2
        integral = float(np.real(self.integrate_top(self.wedge(derivative, derivative))))
        return gap, integral

    # ------------------------------------------------------------------

    @staticmethod
    def _require_degree(form: FormField, degree: int):
        if form.degree != degree:
            raise DegreeError(f"expected a {degree}-form, got degree {form.degree}")

    @staticmethod
    def _same_degree(alpha: FormField, beta: FormField):
        if alpha.degree != beta.degree:
            raise DegreeError(f"cannot pair a {alpha.degree}-form with a {beta.degree}-form")
