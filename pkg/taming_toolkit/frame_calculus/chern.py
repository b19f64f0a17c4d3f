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
Chern connection coefficients in the complex frame.
"""

import logging
from typing import Sequence

import numpy as np

from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.dataclass.structure_coefficients import StructureCoefficients
from taming_toolkit.dataclass.structure_coefficients import conjugate_slot
from taming_toolkit.errors import FrameDegeneracyError
from taming_toolkit.frame_calculus.brackets import structure_coefficients
from taming_toolkit.numerics import pointwise

SAMPLE_POINTS = 16


class ChernConnection:
    """
    Gamma^k_{ij} with nabla_{e_i} e_j = sum_k Gamma^k_{ij} e_k, from

        Gamma^k_{ij} = g^{k lbar} e_i(g_{j lbar}) - g^{k lbar} g_{j rbar} B^{rbar}_{i lbar}

    and, as an oracle, from a pointwise solve of the defining conditions.
    """

    def __init__(self, spec: ManifoldSpec, coefficients: StructureCoefficients | None = None):
        """
        :param spec: The manifold
        :param coefficients: Precomputed structure coefficients
        """
        self.spec = spec
        self.coefficients = coefficients or structure_coefficients(spec)
        self._logger = logging.getLogger(self.__class__.__name__)

    def frame_metric(self, metric: np.ndarray | None = None) -> np.ndarray:
        """g(phi_A, phi_B), complex bilinear, (4, 4, *shape)."""
        metric = self.spec.metric if metric is None else metric
        frame = self.spec.frame.frame
        return np.einsum("aA...,ab...,bB...->AB...", frame, metric, frame)

    def gamma(self, metric: np.ndarray | None = None) -> np.ndarray:
        """
        :param metric: Optional replacement metric field (4, 4, *shape), e.g. a conformal rescale
        :return: Gamma[k, i, j] of shape (2, 2, 2, *shape)
        """
        hermitian = self.frame_metric(metric)[:2, 2:]
        batch = pointwise.to_batch(hermitian)
        if np.min(np.abs(np.linalg.det(batch))) < 1e-14:
            raise FrameDegeneracyError(f"hermitian metric of {self.spec.name} is singular")
        # g^{k lbar} with sum_l g^{k lbar} g_{j lbar} = delta_kj
        inverse = pointwise.from_batch(np.linalg.inv(np.swapaxes(batch, -1, -2)))
        bracket = self.coefficients.bracket

        derivative = np.stack([self.spec.complex_derivative(hermitian, i) for i in range(2)])
        lowered = np.einsum("jr...,ril...->ijl...", hermitian, bracket[2:, :2, 2:])
        return np.einsum("kl...,ijl...->kij...", inverse, derivative - lowered)

    def defining_solve(self, points: Sequence[int] | None = None) -> np.ndarray:
        """
        Solves, at each sampled point, for all 64 complex coefficients Gamma^C_{AB} of a
        real connection that preserves J and g and has vanishing (1,1) torsion.

        :param points: Flat grid indices; an even sample of SAMPLE_POINTS when omitted
        :return: Gamma[k, i, j] restricted to the holomorphic block, shape (2, 2, 2, len(points))
        """
        shape = self.spec.shape
        size = int(np.prod(shape))
        if points is None:
            points = np.unique(np.linspace(0, size - 1, min(SAMPLE_POINTS, size)).astype(int))
        metric = self.frame_metric()
        metric_derivative = np.stack([self.spec.complex_derivative(metric, slot) for slot in range(4)])
        bracket = self.coefficients.bracket

        flat_metric = metric.reshape(4, 4, size)
        flat_derivative = metric_derivative.reshape(4, 4, 4, size)
        flat_bracket = bracket.reshape(4, 4, 4, size)

        result = np.zeros((2, 2, 2, len(points)), dtype=complex)
        for column, point in enumerate(points):
            solution = self._solve_point(
                flat_metric[..., point], flat_derivative[..., point], flat_bracket[..., point]
            )
            result[..., column] = solution[:2, :2, :2]
        return result

    @staticmethod
    def _unknown(c: int, a: int, b: int) -> int:
        return 16 * c + 4 * a + b

    def _solve_point(self, metric: np.ndarray, metric_derivative: np.ndarray, bracket: np.ndarray) -> np.ndarray:
        rows = []
        rhs = []

        def add(coefficients, value):
            rows.append(coefficients)
            rhs.append(value)

        # nabla preserves the type of phi_B
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    if (b < 2) != (c < 2):
                        row = np.zeros(64, dtype=complex)
                        row[self._unknown(c, a, b)] = 1.0
                        add(row, 0.0)
        # phi_A g(phi_B, phi_C) = g(nabla_A phi_B, phi_C) + g(phi_B, nabla_A phi_C)
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    row = np.zeros(64, dtype=complex)
                    for d in range(4):
                        row[self._unknown(d, a, b)] += metric[d, c]
                        row[self._unknown(d, a, c)] += metric[b, d]
                    add(row, metric_derivative[a, b, c])
        # nabla_i phi_jbar - nabla_jbar phi_i = [phi_i, phi_jbar]
        for i in range(2):
            for j in range(2, 4):
                for c in range(4):
                    row = np.zeros(64, dtype=complex)
                    row[self._unknown(c, i, j)] += 1.0
                    row[self._unknown(c, j, i)] -= 1.0
                    add(row, bracket[c, i, j])

        matrix = np.array(rows)
        values = np.array(rhs, dtype=complex)
        real_rows = [np.hstack([matrix.real, -matrix.imag]), np.hstack([matrix.imag, matrix.real])]
        real_rhs = [values.real, values.imag]
        # reality: conj Gamma^C_{AB} = Gamma^{conj C}_{conj A conj B}
        reality = []
        for c in range(4):
            for a in range(4):
                for b in range(4):
                    source = self._unknown(c, a, b)
                    target = self._unknown(conjugate_slot(c), conjugate_slot(a), conjugate_slot(b))
                    row = np.zeros(128)
                    row[source] += 1.0
                    row[target] -= 1.0
                    reality.append(row)
                    row = np.zeros(128)
                    row[64 + source] += 1.0
                    row[64 + target] += 1.0
                    reality.append(row)
        system = np.vstack(real_rows + [np.array(reality)])
        target_rhs = np.concatenate(real_rhs + [np.zeros(len(reality))])
        solution, _, rank, _ = np.linalg.lstsq(system, target_rhs, rcond=None)
        if rank < 128:
            self._logger.warning("defining conditions have rank %d < 128", rank)
        return (solution[:64] + 1j * solution[64:]).reshape(4, 4, 4)

    def compare_with_defining_solve(self, points: Sequence[int] | None = None) -> float:
        """max |Gamma_formula - Gamma_solve| over the sampled points."""
        shape = self.spec.shape
        size = int(np.prod(shape))
        if points is None:
            points = np.unique(np.linspace(0, size - 1, min(SAMPLE_POINTS, size)).astype(int))
        formula = self.gamma().reshape(2, 2, 2, size)[..., points]
        return float(np.max(np.abs(formula - self.defining_solve(points))))
