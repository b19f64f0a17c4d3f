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
Brackets of the complex frame and everything read off from them: structure
coefficients, the Nijenhuis tensor, frame divergences, the frame Hessian of
functions and the delta_j operator with its commutator against conj e_j.
"""

import logging
from functools import cached_property
from typing import Any
from typing import Dict
from typing import Sequence
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.dataclass.structure_coefficients import FRAME_LABELS
from taming_toolkit.dataclass.structure_coefficients import CommutatorCheck
from taming_toolkit.dataclass.structure_coefficients import StructureCoefficients
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.numerics.multi_index import multi_indices
from taming_toolkit.numerics.multi_index import position_of

HOLOMORPHIC = (0, 1)


def full_structure(structure: np.ndarray) -> np.ndarray:
    """
    :param structure: (4, 6) coefficients of d eps^c on eps^a ^ eps^b, a < b
    :return: (4, 4, 4) array S[c, a, b], antisymmetric in (a, b)
    """
    full = np.zeros((4, 4, 4))
    for position, (a, b) in enumerate(multi_indices(2)):
        full[:, a, b] = structure[:, position]
        full[:, b, a] = -structure[:, position]
    return full


def frame_divergences(structure: np.ndarray) -> np.ndarray:
    """div(E_a) of the invariant real frame for a constant volume density."""
    return np.einsum("cac->a", full_structure(structure))


def divergence(spec: ManifoldSpec, vector: np.ndarray) -> np.ndarray:
    """
    Divergence against vol_g of the vector field sum_a vector[a] E_a.

    :param spec: The manifold
    :param vector: (4, *shape) real or complex components
    :return: Scalar field
    """
    density = spec.volume_density
    total = np.zeros(vector.shape[1:], dtype=vector.dtype)
    for index in range(4):
        total = total + spec.derivative(density * vector[index], index)
    return total / density + np.einsum("a,a...->...", frame_divergences(spec.structure), vector)


def structure_coefficients(spec: ManifoldSpec) -> StructureCoefficients:
    """
    Expands every bracket [phi_A, phi_B] of the complex frame in the frame itself.

    [phi_A, phi_B] = phi_A(phi_B^a) E_a - phi_B(phi_A^a) E_a + phi_A^a phi_B^b [E_a, E_b]
    with [E_a, E_b] = -sum_c S[c, a, b] E_c, then theta^C picks the coefficients.
    """
    frame = spec.frame.frame
    if spec.constant_frame:
        transport = 0.0
    else:
        derivatives = np.stack([spec.derivative(frame, index) for index in range(4)])
        moved = np.einsum("bA...,baB...->aAB...", frame, derivatives)
        transport = moved - np.swapaxes(moved, 1, 2)
    algebraic = -np.einsum("aA...,bB...,cab->cAB...", frame, frame, full_structure(spec.structure))
    bracket = np.einsum("Ca...,aAB...->CAB...", spec.frame.coframe, transport + algebraic)

    trace = np.stack([sum(bracket[j + 2, k, k + 2] for k in HOLOMORPHIC) for j in HOLOMORPHIC])
    divergences = np.stack([divergence(spec, frame[:, slot]) for slot in range(4)])
    return StructureCoefficients(
        bracket=bracket,
        mixed=bracket[:2, :2, 2:],
        holomorphic=bracket[:2, :2, :2],
        anti_holomorphic=-bracket[:2, 2:, 2:],
        trace=trace,
        divergence=divergences,
    )


def nijenhuis(spec: ManifoldSpec, coefficients: StructureCoefficients | None = None) -> np.ndarray:
    """
    N^t_{jk} with N(conj e_j, conj e_k) = -[conj e_j, conj e_k]^(1,0) = sum_t N^t_{jk} e_t.

    :return: Array (2, 2, 2, *shape) indexed [t, j, k]
    """
    coefficients = coefficients or structure_coefficients(spec)
    return -coefficients.bracket[:2, 2:, 2:]


class FrameCalculus:
    """
    Frame-level differential operators of one ManifoldSpec.
    """

    def __init__(self, spec: ManifoldSpec, calculus: ExteriorCalculus | None = None):
        """
        :param spec: The manifold
        :param calculus: Exterior calculus to reuse, built when omitted
        """
        self.spec = spec
        self.calculus = calculus or ExteriorCalculus(spec)
        self._logger = logging.getLogger(self.__class__.__name__)

    @cached_property
    def coefficients(self) -> StructureCoefficients:
        """Structure coefficients of the manifold, computed once."""
        result = structure_coefficients(self.spec)
        self._logger.debug("structure coefficients of %s, max bracket %.3e", self.spec.name, result.max_abs())
        return result

    def frame_derivative(self, values: np.ndarray, slot: int) -> np.ndarray:
        """phi_slot applied to a field."""
        return self.spec.complex_derivative(values, slot)

    def nijenhuis(self) -> np.ndarray:
        """N^t_{jk}, see the module level function."""
        return nijenhuis(self.spec, self.coefficients)

    def nijenhuis_norm(self) -> float:
        """max |N^t_{jk}| over the grid."""
        return float(np.max(np.abs(self.nijenhuis())))

    def integrability_defect(self) -> float:
        """
        max |d-_J(J df)| / max |f| over single-mode functions.

        The (0,2) part of d(J df) is 2 sqrt(-1) sum_l N^l_{12} e_l f, so the defect
        vanishes exactly when N does on the sampled modes.
        """
        grid = self.spec.grid
        differentiator = self.spec.differentiator
        count = len(grid.active_coordinates)
        wavevectors = [tuple(int(axis == active) for axis in range(count)) for active in range(count)]
        wavevectors.append((1,) * count)
        worst = 0.0
        for wavevector in wavevectors:
            for kind in ("cos", "sin"):
                mode = differentiator.fourier_mode(wavevector, kind)
                j_df = self.calculus.j_act(self.calculus.d(FormField.scalar(mode)))
                defect = self.calculus.project_minus_j(self.calculus.d(j_df)).max_abs()
                worst = max(worst, defect / max(float(np.max(np.abs(mode))), 1e-300))
        return worst

    def structure_equation_residual(self) -> float:
        """
        max over s of |d theta^s + sum_{A<B} B^s_{AB} theta^A ^ theta^B|, i.e. the
        structure equations rebuilt from the (1,1), (2,0) and (0,2) coefficients.
        """
        bracket = self.coefficients.bracket
        worst = 0.0
        for slot in range(4):
            coefficients = np.stack([-bracket[slot, a, b] for a, b in multi_indices(2)])
            rebuilt = self.calculus.from_type_coefficients(coefficients)
            derivative = self.calculus.d(self.calculus.coframe_form(slot))
            worst = max(worst, (derivative - rebuilt).max_abs())
        return worst

    def hessian_matrix(self, weight: np.ndarray) -> np.ndarray:
        """
        h_{i jbar} = e_i conj e_j phi - sum_l C^{lbar}_{i jbar} conj e_l phi.

        :param weight: Real scalar field phi
        :return: (2, 2, *shape) complex matrix field, hermitian for real phi
        """
        bracket = self.coefficients.bracket
        barred = [self.frame_derivative(weight, slot + 2) for slot in HOLOMORPHIC]
        matrix = np.zeros((2, 2) + weight.shape, dtype=complex)
        for i in HOLOMORPHIC:
            for j in HOLOMORPHIC:
                value = self.frame_derivative(barred[j], i)
                for slot in HOLOMORPHIC:
                    value = value - bracket[slot + 2, i, j + 2] * barred[slot]
                matrix[i, j] = value
        return matrix

    def del_delbar(self, weight: np.ndarray) -> FormField:
        """
        sum h_{i jbar} theta^i ^ conj theta^j; d(J d phi) has (1,1) part -2 sqrt(-1) times this.
        """
        matrix = self.hessian_matrix(weight)
        coefficients = np.zeros((6,) + weight.shape, dtype=complex)
        for i in HOLOMORPHIC:
            for j in HOLOMORPHIC:
                coefficients[position_of((i, j + 2))] = matrix[i, j]
        return self.calculus.from_type_coefficients(coefficients)

    def plurisubharmonic_margin(self, weight: np.ndarray) -> float:
        """Smallest eigenvalue of h_{i jbar} over the grid."""
        matrix = self.hessian_matrix(weight)
        batch = np.moveaxis(np.moveaxis(matrix, 0, -1), 0, -1)
        hermitian = 0.5 * (batch + np.conj(np.swapaxes(batch, -1, -2)))
        return float(np.min(np.linalg.eigvalsh(hermitian)))

    def delta_op(self, values: np.ndarray, j: int, weight: np.ndarray | None = None, trace_sign: float = 1.0):
        """
        delta_j u = e_j u - (e_j phi) u + trace_sign * (sum_k C^{jbar}_{k kbar}) u

        :param values: u_j
        :param j: 0 or 1
        :param weight: phi, zero when omitted
        :param trace_sign: +1 for the displayed form, -1 for the form that is the
            formal weighted adjoint of conj e_j
        """
        result = self.frame_derivative(values, j)
        if weight is not None:
            result = result - self.frame_derivative(weight, j) * values
        return result + trace_sign * self.coefficients.trace[j] * values

    def commutator_check(
        self, i: int, j: int, values: np.ndarray, weight: np.ndarray | None = None, trace_sign: float = 1.0
    ) -> CommutatorCheck:
        """
        Compares (delta_i conj e_j - conj e_j delta_i) u computed by composition with

            h_{i jbar}(phi) u - (sum_r B^r_{i jbar} e_r phi) u
              + sum_r (B^r_{i jbar} e_r + B^{rbar}_{i jbar} conj e_r) u - trace_sign (conj e_j c_i) u
        """
        weight = np.zeros(values.shape) if weight is None else weight
        bracket = self.coefficients.bracket
        trace = self.coefficients.trace

        composed = self.delta_op(self.frame_derivative(values, j + 2), i, weight, trace_sign) - self.frame_derivative(
            self.delta_op(values, i, weight, trace_sign), j + 2
        )

        hessian = self.hessian_matrix(weight)[i, j]
        weight_drift = sum(bracket[r, i, j + 2] * self.frame_derivative(weight, r) for r in HOLOMORPHIC)
        first_order = sum(
            bracket[r, i, j + 2] * self.frame_derivative(values, r)
            + bracket[r + 2, i, j + 2] * self.frame_derivative(values, r + 2)
            for r in HOLOMORPHIC
        )
        trace_drift = trace_sign * self.frame_derivative(trace[i], j + 2)
        expanded = hessian * values - weight_drift * values + first_order - trace_drift * values

        scale = max(float(np.max(np.abs(composed))), float(np.max(np.abs(expanded))), 1e-300)
        return CommutatorCheck(
            composed=composed,
            expanded=expanded,
            residual=float(np.max(np.abs(composed - expanded))) / scale,
            first_order_magnitude=float(np.max(np.abs(first_order))),
            hessian_magnitude=float(np.max(np.abs(hessian * values))),
        )

    def bracket_residual(self, field: np.ndarray) -> float:
        """
        max |[phi_A, phi_B] f - sum_C B^C_{AB} phi_C f| over all pairs for one test function.
        """
        bracket = self.coefficients.bracket
        first = [self.frame_derivative(field, slot) for slot in range(4)]
        worst = 0.0
        for a in range(4):
            for b in range(a + 1, 4):
                commutator = self.frame_derivative(first[b], a) - self.frame_derivative(first[a], b)
                expansion = sum(bracket[c, a, b] * first[c] for c in range(4))
                worst = max(worst, float(np.max(np.abs(commutator - expansion))))
        return worst

    def coefficients_at(self, index: Sequence[int]) -> Dict[str, Any]:
        """
        All bracket coefficients, N and divergences at one grid index, JSON friendly.
        """
        index = tuple(index)
        coefficients = self.coefficients

        def pick(array: np.ndarray) -> Tuple[float, float]:
            value = complex(array[index])
            return value.real, value.imag

        brackets = {}
        for c in range(4):
            for a in range(4):
                for b in range(a + 1, 4):
                    brackets[f"B^{FRAME_LABELS[c]}_{FRAME_LABELS[a]}{FRAME_LABELS[b]}"] = pick(
                        coefficients.bracket[c, a, b]
                    )
        nijenhuis_tensor = self.nijenhuis()
        return {
            "bracket": brackets,
            "nijenhuis": {
                f"N^{FRAME_LABELS[t]}_{j + 1}{k + 1}": pick(nijenhuis_tensor[t, j, k])
                for t in HOLOMORPHIC
                for j in HOLOMORPHIC
                for k in HOLOMORPHIC
            },
            "divergence": {FRAME_LABELS[slot]: pick(coefficients.divergence[slot]) for slot in range(4)},
            "trace": {f"c_{j + 1}": pick(coefficients.trace[j]) for j in HOLOMORPHIC},
        }
