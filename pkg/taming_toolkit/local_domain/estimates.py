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
Weighted identities for real 1-forms a = u + conj(u) on a box.

With the weighted pairing (f, g) = int f conj(g) e^-phi vol_g, the operators

    delta_j u = e_j u - (e_j phi) u - c_j u,      c_j = sum_k B^{jbar}_{k kbar}
    X = conj(e_1) u_2 - conj(e_2) u_1

satisfy, by two integrations by parts against the defining function r,

    ||sum_j delta_j u_j||^2 + ||X||^2
        = sum_ij ||conj(e_i) u_j||^2 + sum_ij ([delta_i, conj(e_j)] u_i, u_j)
          + sum_ij [ int_bd (conj(e_j) r) (delta_i u_i) conj(u_j) e^-phi
                     - int_bd (e_i r) (conj(e_j) u_i) conj(u_j) e^-phi ]
          + sum_ij [ (rho_i conj(e_j) u_i, u_j) - (delta_i u_i, rho_j u_j) ]

where rho_j = div(e_j) + c_j. Since d-_J a has (0,2) coefficient X - Y, the identity
gives ||sum delta u||^2 + ||d-_J a||^2 / 4 + 2 ||Y||^2 >= the right-hand side.
"""

import logging
from typing import Any
from typing import Callable
from typing import Dict
from typing import Sequence
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.term_table import TermRow
from taming_toolkit.dataclass.term_table import TermTable
from taming_toolkit.dataclass.weighted_field import WeightedField
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import ResolutionError
from taming_toolkit.frame_calculus.brackets import frame_divergences
from taming_toolkit.local_domain.box import BoxDomain
from taming_toolkit.numerics.multi_index import wedge_tensor

RECIPES = ("bump", "generic", "zero")
ROUNDOFF_FLOOR = 1e-13
EQUALITY_TOLERANCE = 1e-6
SLACK_TOLERANCE = 1e-8
EXPANSION_TOLERANCE = 1e-8
RESOLUTION_TOLERANCE = 1e-8
PLURISUBHARMONIC_THRESHOLD = 0.1
MAX_DOUBLINGS = 40
BUMP_POWER = 4

logger = logging.getLogger(__name__)


def convergence_order(node_counts: Sequence[int], residuals: Sequence[float], floor: float = ROUNDOFF_FLOOR) -> float:
    """
    Least-squares slope of -log(residual) against log(nodes); inf once the finest
    residual sits at the roundoff floor.
    """
    if len(node_counts) < 2 or len(node_counts) != len(residuals):
        raise ConfigurationError("a convergence fit needs at least 2 matching refinements", key="local.nodes")
    residuals = np.abs(np.asarray(residuals, dtype=float))
    if residuals[-1] <= floor:
        return float("inf")
    keep = residuals > floor
    if np.count_nonzero(keep) < 2:
        return float("inf")
    slope, _ = np.polyfit(np.log(np.asarray(node_counts, dtype=float)[keep]), np.log(residuals[keep]), 1)
    return float(-slope)


class LocalEstimator:
    """
    Term-by-term evaluation of the weighted estimate on one BoxDomain.
    """

    def __init__(self, domain: BoxDomain, strict: bool = False):
        """
        :param domain: The box
        :param strict: Raise ResolutionError instead of flagging under-resolved fields
        """
        self.domain = domain
        self.strict = strict
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # weights

    def squared_distance(self, scale: float, center: Sequence[float] | None = None) -> np.ndarray:
        """phi = scale * |p - center|^2 over the active coordinates."""
        center = self.domain.center if center is None else np.asarray(center, dtype=float)
        total = np.zeros(self.domain.shape)
        for axis, coordinate in enumerate(self.domain.active):
            total = total + (self.domain.coordinate(coordinate) - center[axis]) ** 2
        return scale * total

    def hessian(self, weight: np.ndarray) -> np.ndarray:
        """h_{i jbar} = e_i conj(e_j) phi - sum_l B^{lbar}_{i jbar} conj(e_l) phi, (2, 2, *shape)."""
        domain = self.domain
        barred = [domain.complex_derivative(weight, slot + 2) for slot in range(2)]
        matrix = np.zeros((2, 2) + weight.shape, dtype=complex)
        for i in range(2):
            for j in range(2):
                value = domain.complex_derivative(barred[j], i)
                for slot in range(2):
                    value = value - domain.bracket[slot + 2, i, j + 2] * barred[slot]
                matrix[i, j] = value
        return matrix

    def plurisubharmonic_margin(self, weight: np.ndarray) -> float:
        """Smallest eigenvalue of the hermitian part of h over the nodes."""
        batch = np.moveaxis(np.moveaxis(self.hessian(weight), 0, -1), 0, -1)
        hermitian = 0.5 * (batch + np.conj(np.swapaxes(batch, -1, -2)))
        return float(np.min(np.linalg.eigvalsh(hermitian)))

    def default_weight(
        self, scale: float = 0.05, threshold: float = PLURISUBHARMONIC_THRESHOLD
    ) -> Tuple[np.ndarray, float, float]:
        """
        The squared distance to the box centre, the scale doubled until the
        plurisubharmonic margin exceeds the threshold.

        :return: (phi, scale, margin)
        """
        if scale <= 0.0:
            raise ConfigurationError("the weight scale must be positive", key="local.weight_scale")
        for _ in range(MAX_DOUBLINGS):
            weight = self.squared_distance(scale)
            margin = self.plurisubharmonic_margin(weight)
            if margin > threshold:
                self._logger.debug("weight scale %.4g gives margin %.4g", scale, margin)
                return weight, scale, margin
            if margin <= 0.0:
                raise ConfigurationError(
                    f"|p - c|^2 is not plurisubharmonic on this box (margin {margin:.3e}), shrink the box",
                    key="local.extents",
                )
            scale *= 2.0
        raise ConfigurationError(f"no weight scale reached margin {threshold}", key="local.weight_scale")

    # ------------------------------------------------------------------
    # fields

    def make_field(self, recipe: str, weight: np.ndarray, seed: int = 0) -> WeightedField:
        """
        :param recipe: "bump" (vanishing to order BUMP_POWER on the faces), "generic"
            (smooth, nonzero on the faces) or "zero"
        :param weight: phi on the nodes
        :param seed: Seed of the random coefficients
        """
        if recipe not in RECIPES:
            raise ConfigurationError(
                f"unknown field recipe '{recipe}', expected one of {RECIPES}", key="local.u_recipe"
            )
        domain = self.domain
        rng = np.random.default_rng(seed)
        count = len(domain.shape)
        reference = [domain.reference_coordinate(axis) for axis in range(count)]
        components = np.zeros((2,) + domain.shape, dtype=complex)
        if recipe == "bump":
            bump = np.ones(domain.shape)
            for values in reference:
                bump = bump * (1.0 - values**2) ** BUMP_POWER
            for j in range(2):
                coefficients = rng.standard_normal((count + 1, 2)) @ np.array([1.0, 1.0j])
                polynomial = coefficients[0] + sum(coefficients[axis + 1] * reference[axis] for axis in range(count))
                components[j] = bump * polynomial
        elif recipe == "generic":
            for j in range(2):
                coefficients = rng.standard_normal((2 * count + 1, 2)) @ np.array([1.0, 1.0j])
                values = np.full(domain.shape, coefficients[0])
                for axis in range(count):
                    values = values + coefficients[2 * axis + 1] * np.cos(1.3 * reference[axis] + 0.2 * j)
                    values = values + coefficients[2 * axis + 2] * np.sin(2.1 * reference[axis])
                components[j] = values
        return WeightedField(components, np.asarray(weight, dtype=float), recipe)

    # ------------------------------------------------------------------
    # weighted calculus

    def inner(self, left: np.ndarray, right: np.ndarray, weight: np.ndarray, sign: float = -1.0) -> complex:
        """int left conj(right) e^(sign phi) vol_g"""
        return complex(self.domain.integrate(left * np.conj(right) * np.exp(sign * weight)))

    def norm_squared(self, values: np.ndarray, weight: np.ndarray, sign: float = -1.0) -> float:
        """Weighted squared L2 norm."""
        return float(np.real(self.inner(values, values, weight, sign)))

    @property
    def divergence_shift(self) -> np.ndarray:
        """rho_j = div(e_j) + c_j"""
        return self.domain.frame_divergence[:2] + self.domain.trace

    def delta(self, values: np.ndarray, j: int, weight: np.ndarray) -> np.ndarray:
        """delta_j u = e_j u - (e_j phi) u - c_j u"""
        domain = self.domain
        return (
            domain.complex_derivative(values, j)
            - domain.complex_derivative(weight, j) * values
            - domain.trace[j] * values
        )

    def delta_sum(self, field: WeightedField, conjugate: bool = False) -> np.ndarray:
        """
        sum_j delta_j u_j, or with conjugate=True the same expression built from the
        barred frame on conj(u), which is its complex conjugate.
        """
        domain = self.domain
        weight = field.weight
        total = np.zeros(domain.shape, dtype=complex)
        for j in range(2):
            if conjugate:
                values = np.conj(field.components[j])
                total = total + (
                    domain.complex_derivative(values, j + 2)
                    - domain.complex_derivative(weight, j + 2) * values
                    - np.conj(domain.trace[j]) * values
                )
            else:
                total = total + self.delta(field.components[j], j, weight)
        return total

    def weighted_adjoint_phi(self, field: WeightedField) -> np.ndarray:
        """W~*_phi a = e^phi Lambda_F d(e^-phi a) = 4 Im sum_j delta_j u_j"""
        return 4.0 * np.imag(self.delta_sum(field))

    def real_form(self, field: WeightedField) -> np.ndarray:
        """Components of a = u + conj(u) in the real coframe, (4, *shape)."""
        barred = self.domain.coframe[2:]
        return 2.0 * np.real(np.einsum("ja,j...->a...", barred, field.components))

    def exterior_derivative(self, components: np.ndarray) -> np.ndarray:
        """d of a 1-form given by real-coframe components, structure terms included."""
        domain = self.domain
        selector = wedge_tensor(1, 1)
        result = np.einsum("ik,i...->k...", domain.spec.structure_matrices[1], components)
        for coordinate in domain.active:
            derivative = domain.derivative(components, coordinate)
            result = result + np.einsum("ik,i...->k...", selector[coordinate], derivative)
        return result

    def x_term(self, field: WeightedField) -> np.ndarray:
        """X = conj(e_1) u_2 - conj(e_2) u_1"""
        domain = self.domain
        return domain.complex_derivative(field.u2, 2) - domain.complex_derivative(field.u1, 3)

    def y_term(self, field: WeightedField) -> np.ndarray:
        """Y = sum_l C^{lbar}_{1bar 2bar} u_l - sum_l N^l_{12} conj(u_l), with N^l_{12} = -B^l_{1bar 2bar}"""
        bracket = self.domain.bracket
        return sum(
            bracket[slot + 2, 2, 3] * field.components[slot] + bracket[slot, 2, 3] * np.conj(field.components[slot])
            for slot in range(2)
        )

    # ------------------------------------------------------------------
    # expansion checks

    def weighted_adjoint_expansion_check(self, field: WeightedField) -> float:
        """
        Relative max difference of e^phi Lambda_F d(e^-phi a), computed on real
        components, and the frame expansion 4 Im sum delta_j u_j.
        """
        domain = self.domain
        weight = field.weight
        damped = self.real_form(field) * np.exp(-weight)
        derivative = self.exterior_derivative(damped)
        contracted = np.einsum("i,i...->...", domain.two_form_gram @ domain.fundamental_form, derivative)
        direct = np.exp(weight) * contracted
        expanded = self.weighted_adjoint_phi(field)
        scale = max(float(np.max(np.abs(direct))), float(np.max(np.abs(expanded))), 1e-300)
        return float(np.max(np.abs(direct - expanded))) / scale

    def d_minus_expansion_check(self, field: WeightedField) -> Dict[str, float]:
        """
        |d-_J a|^2 on real components against 8 |X - Y|^2, pointwise and integrated.
        """
        domain = self.domain
        derivative = self.exterior_derivative(self.real_form(field))
        j_image = np.einsum("ik,i...->k...", domain.j_two, derivative)
        minus = 0.5 * (derivative - j_image)
        direct = np.einsum("ij,i...,j...->...", domain.two_form_gram, minus, minus)
        expanded = 8.0 * np.abs(self.x_term(field) - self.y_term(field)) ** 2
        scale = max(float(np.max(np.abs(direct))), float(np.max(expanded)), 1e-300)
        integrated_direct = float(np.real(domain.integrate(direct * np.exp(-field.weight))))
        integrated_expanded = float(np.real(domain.integrate(expanded * np.exp(-field.weight))))
        return {
            "pointwise": float(np.max(np.abs(direct - expanded))) / scale,
            "integrated_direct": integrated_direct,
            "integrated_expanded": integrated_expanded,
        }

    def commutator(self, values: np.ndarray, i: int, j: int, weight: np.ndarray) -> np.ndarray:
        """[delta_i, conj(e_j)] u by composition."""
        domain = self.domain
        return self.delta(domain.complex_derivative(values, j + 2), i, weight) - domain.complex_derivative(
            self.delta(values, i, weight), j + 2
        )

    def commutator_expansion(
        self, values: np.ndarray, i: int, j: int, weight: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        h_{i jbar} u - (sum_r B^r_{i jbar} e_r phi) u + sum_r (B^r e_r + B^{rbar} conj(e_r)) u + (conj(e_j) c_i) u

        :return: (total, Hessian part, first-order part)
        """
        domain = self.domain
        bracket = domain.bracket
        hessian = self.hessian(weight)[i, j] * values
        drift = sum(bracket[r, i, j + 2] * domain.complex_derivative(weight, r) for r in range(2)) * values
        first_order = sum(
            bracket[r, i, j + 2] * domain.complex_derivative(values, r)
            + bracket[r + 2, i, j + 2] * domain.complex_derivative(values, r + 2)
            for r in range(2)
        )
        # c_i is constant on a constant frame
        return hessian - drift + first_order, hessian, first_order

    # ------------------------------------------------------------------
    # divergence lemma

    def div_lemma_check(self, vector: np.ndarray, values: np.ndarray) -> Dict[str, float]:
        """
        Both sides of int L f = int_bd (L r) f - int div(L) f for L = sum_a vector[a] d/dx^a.

        :param vector: (4,) constants or (4, *shape) node fields
        :param values: f on the nodes
        """
        domain = self.domain
        vector = np.asarray(vector)
        frame_div = frame_divergences(domain.spec.structure)
        divergence = np.zeros(domain.shape, dtype=np.result_type(vector, float))
        for coordinate in range(4):
            component = vector[coordinate]
            if np.ndim(component):
                divergence = divergence + domain.derivative(component, coordinate)
            divergence = divergence + frame_div[coordinate] * component
        interior = complex(domain.integrate(domain.vector_derivative(values, vector)))
        boundary = complex(domain.boundary_integral(vector, values))
        volume = complex(domain.integrate(divergence * values))
        residual = abs(interior - (boundary - volume))
        return {
            "interior": abs(interior),
            "boundary": abs(boundary),
            "divergence": abs(volume),
            "residual": residual,
            "resolution_defect": domain.resolution_defect(values),
        }

    def div_lemma_convergence(
        self,
        vector: Callable[[BoxDomain], np.ndarray],
        values: Callable[[BoxDomain], np.ndarray],
        node_counts: Sequence[int],
    ) -> Dict[str, Any]:
        """Divergence lemma residuals on refined boxes with the fitted order."""
        residuals = []
        for count in node_counts:
            refined = LocalEstimator(self.domain.refined(count), self.strict)
            residuals.append(refined.div_lemma_check(vector(refined.domain), values(refined.domain))["residual"])
        order = convergence_order(node_counts, residuals)
        self._logger.info("divergence lemma residuals %s, order %.2f", residuals, order)
        return {"nodes": list(node_counts), "residuals": residuals, "order": order}

    # ------------------------------------------------------------------
    # the estimate

    def _boundary(self, field: WeightedField, swapped: bool) -> Tuple[complex, complex]:
        domain = self.domain
        damping = np.exp(-field.weight)
        delta_part = 0.0
        bar_part = 0.0
        for i in range(2):
            for j in range(2):
                if swapped:
                    carried = self.delta(field.components[j], i, field.weight)
                    partner = field.components[i]
                else:
                    carried = self.delta(field.components[i], i, field.weight)
                    partner = field.components[j]
                delta_part = delta_part + domain.boundary_integral(
                    domain.frame[:, j + 2], carried * np.conj(partner) * damping
                )
                barred = domain.complex_derivative(field.components[i], j + 2)
                bar_part = bar_part - domain.boundary_integral(
                    domain.frame[:, i], barred * np.conj(field.components[j]) * damping
                )
        return complex(delta_part), complex(bar_part)

    # pylint: disable=too-many-locals,too-many-statements
    def local_estimate_report(
        self,
        field: WeightedField,
        tolerance: float = EQUALITY_TOLERANCE,
        slack_tolerance: float = SLACK_TOLERANCE,
    ) -> TermTable:
        """
        Every term of the weighted identity and inequality, the expansion checks and
        the alternative printed readings (weight e^+phi on the gradient sum, delta_i
        acting on u_j in the boundary term) with their equality residuals.

        :raises ResolutionError: in strict mode when the field is under-resolved
        """
        domain = self.domain
        weight = field.weight
        components = field.components
        rho = self.divergence_shift
        table = TermTable("local_estimate")

        resolution = max(domain.resolution_defect(components), domain.resolution_defect(np.exp(-weight)))
        if resolution > RESOLUTION_TOLERANCE and self.strict:
            raise ResolutionError(f"top Legendre modes carry {resolution:.3e} of the field, add nodes")

        delta_sum = self.delta_sum(field)
        x_term = self.x_term(field)
        y_term = self.y_term(field)
        delta_sq = self.norm_squared(delta_sum, weight)
        x_sq = self.norm_squared(x_term, weight)
        y_sq = self.norm_squared(y_term, weight)
        d_minus_sq = 8.0 * self.norm_squared(x_term - y_term, weight)
        adjoint_sq = self.norm_squared(self.weighted_adjoint_phi(field), weight)

        gradient = {sign: 0.0 for sign in (-1.0, 1.0)}
        commutator = 0.0
        hessian_pairing = 0.0
        first_order = 0.0
        expansion_defect = 0.0
        divergence_terms = 0.0
        for i in range(2):
            for j in range(2):
                barred = domain.complex_derivative(components[j], i + 2)
                for sign in gradient:
                    gradient[sign] += self.norm_squared(barred, weight, sign)
                composed = self.commutator(components[i], i, j, weight)
                expanded, hessian_part, first_part = self.commutator_expansion(components[i], i, j, weight)
                commutator += self.inner(composed, components[j], weight)
                hessian_pairing += self.inner(hessian_part, components[j], weight)
                first_order = max(first_order, float(np.max(np.abs(first_part))))
                expansion_defect = max(expansion_defect, float(np.max(np.abs(composed - expanded))))
                divergence_terms += self.inner(
                    rho[i] * domain.complex_derivative(components[i], j + 2), components[j], weight
                ) - self.inner(self.delta(components[i], i, weight), rho[j] * components[j], weight)

        boundary = {}
        for swapped in (False, True):
            delta_part, bar_part = self._boundary(field, swapped)
            boundary[swapped] = (delta_part, bar_part)

        left = delta_sq + x_sq
        scale = max(left, gradient[-1.0], 1e-300)

        def residual(sign: float, swapped: bool) -> float:
            right = gradient[sign] + commutator + sum(boundary[swapped]) + divergence_terms
            return abs(left - right) / scale

        right = gradient[-1.0] + commutator + sum(boundary[False]) + divergence_terms
        slack = (delta_sq + 0.25 * d_minus_sq + 2.0 * y_sq - float(np.real(right))) / scale
        commutator_scale = max(float(np.max(np.abs(components))), 1e-300)

        for name, value in (
            ("w_tilde_star_phi_sq", adjoint_sq),
            ("delta_sum_sq", delta_sq),
            ("x_sq", x_sq),
            ("y_sq", y_sq),
            ("d_minus_sq", d_minus_sq),
            ("gradient_sum", gradient[-1.0]),
            ("commutator", float(np.real(commutator))),
            ("hessian_pairing", float(np.real(hessian_pairing))),
            ("first_order_magnitude", first_order),
            ("boundary_delta", float(np.real(boundary[False][0]))),
            ("boundary_bar", float(np.real(boundary[False][1]))),
            ("divergence_terms", float(np.real(divergence_terms))),
            ("right_hand_side_imag", float(np.imag(right)) / scale),
        ):
            table.add(TermRow.info(name, value))

        table.add(TermRow.check("equality_residual", residual(-1.0, False), tolerance))
        table.add(TermRow.at_least("inequality_slack", slack, slack_tolerance))
        table.add(TermRow.check("commutator_expansion", expansion_defect / commutator_scale, tolerance))
        table.add(TermRow.check("weighted_adjoint_expansion", self.weighted_adjoint_expansion_check(field), tolerance))
        table.add(TermRow.check("d_minus_expansion", self.d_minus_expansion_check(field)["pointwise"], tolerance))
        table.add(TermRow.check("resolution_defect", resolution, RESOLUTION_TOLERANCE))

        readings = {
            "minus_weight.delta_on_own_index": residual(-1.0, False),
            "plus_weight.delta_on_own_index": residual(1.0, False),
            "minus_weight.delta_on_partner": residual(-1.0, True),
            "plus_weight.delta_on_partner": residual(1.0, True),
        }
        for name, value in readings.items():
            table.add(TermRow.info(f"reading.{name}", value))

        table.summary.update(
            {
                "spec": domain.spec.name,
                "recipe": field.recipe,
                "nodes": domain.nodes,
                "extents": [list(pair) for pair in domain.extents],
                "plurisubharmonic_margin": self.plurisubharmonic_margin(weight),
                "balancing_reading": min(readings, key=readings.get),
                "defining_function": domain.defining_function_report(),
            }
        )
        if not table.passed:
            self._logger.warning("local estimate on %s failed: %s", domain.spec.name, table.failed())
        return table
