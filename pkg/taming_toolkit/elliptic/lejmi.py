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
Lejmi's operator P psi = P-_J d d* psi on J-anti-invariant 2-forms.

Anti-invariant forms are carried by two real coordinate fields on the pointwise
orthonormal basis psi_1, psi_2 = Re, Im of theta^1 ^ theta^2. In the variables
y = sqrt(mu) c the operator is symmetric for the plain dot product, and the dealiasing
projection removes the Nyquist modes that every spectral derivative annihilates.
"""

import logging
from functools import cached_property
from typing import List
from typing import Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator
from scipy.sparse.linalg import lobpcg

from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.dataclass.w_bundle import KernelBasis
from taming_toolkit.dataclass.w_bundle import SigmaSolve
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import OrthogonalityDefectError
from taming_toolkit.errors import PreconditionError
from taming_toolkit.errors import SolverDivergenceError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.numerics.krylov import solve_symmetric

DENSE_LIMIT = 2048
KERNEL_TOLERANCE = 1e-9
ANTI_INVARIANT_TOLERANCE = 1e-8
LOBPCG_SEED = 1729


class LejmiOperator:
    """
    Coordinates, application, kernel and minimal-norm solves of P.
    """

    def __init__(
        self, spec: ManifoldSpec, calculus: ExteriorCalculus | None = None, config: EllipticSolveConfig | None = None
    ):
        """
        :param spec: The manifold
        :param calculus: Exterior calculus to reuse
        :param config: Solver settings, defaults when omitted
        """
        self.spec = spec
        self.calculus = calculus or ExteriorCalculus(spec)
        self.config = config or EllipticSolveConfig()
        self._root = np.sqrt(spec.volume_density)
        self._worst_kernel_defect = 0.0
        self._kernel_defect_count = 0
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # coordinates

    @cached_property
    def basis(self) -> Tuple[FormField, FormField]:
        """psi_1, psi_2: pointwise unit Re and Im of theta^1 ^ theta^2."""
        holomorphic = self.calculus.wedge(self.calculus.coframe_form(0), self.calculus.coframe_form(1))
        forms = []
        for part in (holomorphic.real, holomorphic.imag):
            length = np.sqrt(self.calculus.pointwise_inner(part, part))
            forms.append(part / length)
        return forms[0], forms[1]

    def coordinates(self, beta: FormField) -> np.ndarray:
        """(g(beta, psi_1), g(beta, psi_2)) as a (2, *shape) array."""
        return np.stack([self.calculus.pointwise_inner(beta, form) for form in self.basis])

    def from_coordinates(self, coordinates: np.ndarray) -> FormField:
        """sum c_k psi_k"""
        first, second = self.basis
        return first * coordinates[0] + second * coordinates[1]

    def project(self, beta: FormField) -> FormField:
        """Orthogonal projection P-_J onto the anti-invariant sector."""
        return self.from_coordinates(self.coordinates(beta))

    def anti_invariant_defect(self, beta: FormField) -> float:
        """Relative size of the J-invariant part of beta."""
        scale = max(beta.max_abs(), 1e-300)
        return (beta - self.project(beta)).max_abs() / scale

    # ------------------------------------------------------------------
    # application

    def apply_coordinates(self, coordinates: np.ndarray) -> np.ndarray:
        """Coordinates of P-_J d d* (sum c_k psi_k)."""
        form = self.from_coordinates(coordinates)
        return self.coordinates(self.calculus.d(self.calculus.d_star(form)))

    def lejmi_apply(self, psi: FormField) -> FormField:
        """
        :param psi: A J-anti-invariant 2-form
        :return: P psi
        :raises PreconditionError: when psi has a J-invariant part
        """
        defect = self.anti_invariant_defect(psi)
        if defect > ANTI_INVARIANT_TOLERANCE:
            raise PreconditionError(f"input is not J-anti-invariant (defect {defect:.3e})")
        return self.from_coordinates(self.apply_coordinates(self.coordinates(psi)))

    def _dealias(self, flat: np.ndarray) -> np.ndarray:
        values = flat.reshape((2,) + self.spec.shape)
        return self.spec.differentiator.dealias(values).ravel()

    def scaled_apply(self, flat: np.ndarray) -> np.ndarray:
        """Pi S Q S^-1 Pi on flat real vectors, S = sqrt(mu)."""
        coordinates = self._dealias(flat).reshape((2,) + self.spec.shape) / self._root
        return self._dealias((self._root * self.apply_coordinates(coordinates)).ravel())

    def _precondition(self, flat: np.ndarray) -> np.ndarray:
        values = flat.reshape((2,) + self.spec.shape)
        return self.spec.differentiator.smooth(values).ravel()

    # ------------------------------------------------------------------
    # kernel

    @cached_property
    def constant_kernel(self) -> KernelBasis:
        """Closed forms among the constant-coordinate combinations of psi_1, psi_2."""
        images = [self.calculus.d(form) for form in self.basis]
        gram = np.array([[np.real(self.calculus.inner(a, b)) for b in images] for a in images])
        values, vectors = np.linalg.eigh(gram)
        scale = max(1.0, float(np.max(np.abs(values))))
        volume = float(np.real(self.spec.integrate(self.spec.volume_density)))
        forms = []
        for value, vector in zip(values, vectors.T):
            if value > KERNEL_TOLERANCE * scale:
                continue
            coordinates = np.stack([np.full(self.spec.shape, vector[0]), np.full(self.spec.shape, vector[1])])
            forms.append(self.from_coordinates(coordinates) / np.sqrt(volume))
        self._logger.debug("constant-sector kernel of %s has dimension %d", self.spec.name, len(forms))
        return KernelBasis(sector="constant", forms=forms, eigenvalues=values)

    def lejmi_kernel(self, n_modes: int = 4, sector: str = "constant") -> KernelBasis:
        """
        :param n_modes: Number of lowest eigenpairs inspected in the grid sector
        :param sector: "constant" or "grid"
        :return: KernelBasis of closed anti-invariant forms
        """
        if sector == "constant":
            return self.constant_kernel
        if sector != "grid":
            raise ConfigurationError(f"unknown kernel sector '{sector}'", key="sector")

        size = 2 * self.spec.grid.size

        def full_apply(flat: np.ndarray) -> np.ndarray:
            return self.scaled_apply(flat) + flat - self._dealias(flat)

        if size <= DENSE_LIMIT:
            matrix = np.column_stack([full_apply(column) for column in np.eye(size)])
            values, vectors = np.linalg.eigh(0.5 * (matrix + matrix.T))
            values, vectors = values[:n_modes], vectors[:, :n_modes]
        else:
            operator = LinearOperator((size, size), matvec=full_apply, dtype=float)
            start = np.random.default_rng(LOBPCG_SEED).standard_normal((size, n_modes))
            values, vectors = lobpcg(
                operator, start, largest=False, tol=KERNEL_TOLERANCE, maxiter=self.config.max_iterations
            )
            order = np.argsort(values)
            values, vectors = values[order], vectors[:, order]
            residual = np.linalg.norm(
                np.column_stack([full_apply(v) for v in vectors.T]) - vectors * values, axis=0
            ).max()
            if residual > 1e3 * KERNEL_TOLERANCE:
                raise SolverDivergenceError(f"lobpcg eigen-residual {residual:.3e} on {self.spec.name}")

        scale = max(1.0, float(np.max(np.abs(values))))
        forms = []
        for value, vector in zip(values, vectors.T):
            if value > KERNEL_TOLERANCE * scale:
                continue
            coordinates = vector.reshape((2,) + self.spec.shape) / self._root
            forms.append(self.from_coordinates(coordinates) / np.sqrt(self.spec.grid.cell_weight))
        return KernelBasis(sector="grid", forms=forms, eigenvalues=values)

    def _scaled_kernel_vectors(self) -> List[np.ndarray]:
        vectors = []
        for form in self.constant_kernel.forms:
            vector = self._dealias((self._root * self.coordinates(form)).ravel())
            for previous in vectors:
                vector = vector - previous * float(previous @ vector)
            length = float(np.linalg.norm(vector))
            if length > 0.0:
                vectors.append(vector / length)
        return vectors

    # ------------------------------------------------------------------
    # solves

    def solve(self, rhs: np.ndarray, reference: float, label: str = "sigma") -> SigmaSolve:
        """
        Minimal-norm solution of Q c = rhs orthogonal to the kernel.

        :param rhs: (2, *shape) right-hand side coordinates
        :param reference: Size against which rhs is compared with the noise floor
        :param label: Name used in logs
        """
        shape = (2,) + self.spec.shape
        target = self._dealias((self._root * rhs).ravel())
        target_norm = float(np.linalg.norm(target))
        if target_norm <= self.config.noise_floor * max(reference, 1e-300):
            self._logger.debug("%s: right-hand side below the noise floor", label)
            zero = np.zeros(shape)
            return SigmaSolve(self.from_coordinates(zero), zero, 0, 0.0, 0.0)

        kernel = self._scaled_kernel_vectors()
        defect = 0.0
        for vector in kernel:
            overlap = float(vector @ target)
            defect = max(defect, abs(overlap) / target_norm)
            if self.config.deflate_kernel:
                target = target - overlap * vector
        if defect > self.config.kernel_tolerance:
            message = f"{label}: right-hand side has kernel component {defect:.3e}"
            if self.config.strict:
                raise OrthogonalityDefectError(message)
            self._logger.debug(message)
            self._worst_kernel_defect = max(self._worst_kernel_defect, defect)
            self._kernel_defect_count += 1

        preconditioner = self._precondition if self.config.preconditioner == "inverse_laplacian" else None
        result = solve_symmetric(
            self.scaled_apply,
            target,
            self.config.rtol,
            self.config.max_iterations,
            preconditioner=preconditioner,
            label=label,
        )
        solution = self._dealias(result.solution)
        for vector in kernel:
            solution = solution - vector * float(vector @ solution)
        coordinates = solution.reshape(shape) / self._root
        return SigmaSolve(
            form=self.from_coordinates(coordinates),
            coordinates=coordinates,
            iterations=result.iterations,
            relative_residual=result.relative_residual,
            kernel_defect=defect,
        )

    def flush_kernel_defects(self, context: str) -> float:
        """
        Logs the kernel defects recorded since the last flush once and resets them.

        :param context: What the solves were for, e.g. the assembled space
        :return: The worst relative kernel component, 0 when none exceeded the tolerance
        """
        worst, count = self._worst_kernel_defect, self._kernel_defect_count
        if count:
            self._logger.warning("%s: %d right-hand sides had a kernel component, worst %.3e", context, count, worst)
        self._worst_kernel_defect = 0.0
        self._kernel_defect_count = 0
        return worst
