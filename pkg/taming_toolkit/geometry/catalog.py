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
The manifold catalog: flat Kaehler torus, Kodaira-Thurston nilmanifold in its invariant
coframe, and the torus with a conjugated (tamed, non-compatible) almost complex structure.
"""

import logging
from typing import Callable
from typing import Dict
from typing import Mapping

import numpy as np

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ClosednessError
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import NumericalError
from taming_toolkit.errors import TamingViolationError
from taming_toolkit.geometry.frames import complex_frame
from taming_toolkit.geometry.frames import dual_coframe
from taming_toolkit.geometry.hermitian import build_hermitian_from_taming
from taming_toolkit.geometry.hermitian import taming_margins
from taming_toolkit.numerics import pointwise
from taming_toolkit.numerics.multi_index import basis_vector
from taming_toolkit.numerics.multi_index import exterior_structure_matrices
from taming_toolkit.numerics.multi_index import position_of
from taming_toolkit.numerics.spectral import SpectralDifferentiator

FLAT_TORUS = "flat_torus_kahler"
KODAIRA_THURSTON = "kodaira_thurston"
TORUS_PERTURBED = "torus_perturbed"

CATALOG = (FLAT_TORUS, KODAIRA_THURSTON, TORUS_PERTURBED)

T, X, Y, Z = range(4)

J_SQUARED_TOLERANCE = 1e-12
CLOSEDNESS_TOLERANCE = 1e-10
BISECTION_STEPS = 60


def standard_j() -> np.ndarray:
    """J0 with J d/dt = d/dx and J d/dy = d/dz."""
    matrix = np.zeros((4, 4))
    matrix[X, T] = 1.0
    matrix[T, X] = -1.0
    matrix[Z, Y] = 1.0
    matrix[Y, Z] = -1.0
    return matrix


def standard_omega() -> np.ndarray:
    """eps^tx + eps^yz"""
    return basis_vector(2, (T, X)) + basis_vector(2, (Y, Z))


def nilpotent_direction() -> np.ndarray:
    """N0 = e_t e_y^T, so (I + s N0)^-1 = I - s N0."""
    matrix = np.zeros((4, 4))
    matrix[T, Y] = 1.0
    return matrix


class ManifoldBuilder:
    """
    Builds ManifoldSpec instances from the catalog and checks their invariants.
    """

    def __init__(self):
        self._logger = logging.getLogger(self.__class__.__name__)
        self._recipes: Dict[str, Callable[[GridSpec, Mapping[str, float]], ManifoldSpec]] = {
            FLAT_TORUS: self._flat_torus,
            KODAIRA_THURSTON: self._kodaira_thurston,
            TORUS_PERTURBED: self._torus_perturbed,
        }

    def build_manifold(
        self, catalog_id: str, grid: GridSpec, params: Mapping[str, float] | None = None
    ) -> ManifoldSpec:
        """
        :param catalog_id: One of CATALOG
        :param grid: Grid the fields are sampled on
        :param params: Catalog parameters, e.g. {"epsilon": 0.1} for the perturbed torus
        :return: A ManifoldSpec satisfying the taming, closedness and J^2 = -1 checks
        """
        recipe = self._recipes.get(catalog_id)
        if recipe is None:
            raise ConfigurationError(f"unknown manifold '{catalog_id}', expected one of {CATALOG}", key="manifold.id")
        spec = recipe(grid, dict(params or {}))
        self._check_closed(spec)
        resolution = "x".join(map(str, grid.active_resolution))
        self._logger.info("built %s on %s, taming margin %.4f", spec.name, resolution, spec.taming_margin)
        return spec

    def _flat_torus(self, grid: GridSpec, params: Mapping[str, float]) -> ManifoldSpec:
        shape = grid.shape
        almost_complex = pointwise.constant_field(standard_j(), shape)
        anchors = pointwise.constant_field(np.eye(4)[:, [T, Y]], shape)
        return self._assemble(
            name=FLAT_TORUS,
            grid=grid,
            params=params,
            structure=np.zeros((4, 6)),
            almost_complex=almost_complex,
            omega=standard_omega(),
            anchors=anchors,
            flags={"integrable": True, "kahler": True, "unimodular": True, "constant_frame": True},
        )

    def _kodaira_thurston(self, grid: GridSpec, params: Mapping[str, float]) -> ManifoldSpec:
        if grid.active[Z]:
            raise ConfigurationError("kodaira_thurston fields live in the z-invariant sector", key="grid.active")
        shape = grid.shape
        structure = np.zeros((4, 6))
        # gamma = dz - x dy, d gamma = -dx ^ dy
        structure[Z, position_of((X, Y))] = -1.0
        almost_complex = pointwise.constant_field(standard_j(), shape)
        anchors = pointwise.constant_field(np.eye(4)[:, [T, Y]], shape)
        return self._assemble(
            name=KODAIRA_THURSTON,
            grid=grid,
            params=params,
            structure=structure,
            almost_complex=almost_complex,
            omega=standard_omega(),
            anchors=anchors,
            flags={"integrable": False, "kahler": False, "unimodular": True, "constant_frame": True},
        )

    def _torus_perturbed(self, grid: GridSpec, params: Mapping[str, float]) -> ManifoldSpec:
        unknown = set(params) - {"epsilon"}
        if unknown:
            raise ConfigurationError(f"unknown parameters {sorted(unknown)}", key="manifold.params")
        epsilon = float(params.get("epsilon", 0.1))
        eps_max = self.perturbation_limit(grid)
        if epsilon < 0.0 or epsilon >= eps_max:
            raise TamingViolationError(f"epsilon {epsilon} outside [0, {eps_max:.6f})")
        almost_complex, conjugator = self._perturbed_structure(grid, epsilon)
        anchors = pointwise.matmul(conjugator, pointwise.constant_field(np.eye(4)[:, [T, Y]], grid.shape))
        compatible = epsilon == 0.0
        return self._assemble(
            name=TORUS_PERTURBED,
            grid=grid,
            params={"epsilon": epsilon},
            structure=np.zeros((4, 6)),
            almost_complex=almost_complex,
            omega=standard_omega(),
            anchors=anchors,
            flags={
                "integrable": compatible,
                "kahler": compatible,
                "unimodular": True,
                "constant_frame": compatible,
            },
            eps_max=eps_max,
        )

    @staticmethod
    def perturbation_profile(grid: GridSpec) -> np.ndarray:
        """b = sin(2 pi x) + cos(2 pi (t + y)) / 2, periodic and independent of z."""
        t_phase = grid.coordinate(T) / grid.periods[T]
        x_phase = grid.coordinate(X) / grid.periods[X]
        y_phase = grid.coordinate(Y) / grid.periods[Y]
        return np.sin(2.0 * np.pi * x_phase) + 0.5 * np.cos(2.0 * np.pi * (t_phase + y_phase))

    def _perturbed_structure(self, grid: GridSpec, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
        shape = grid.shape
        amplitude = epsilon * self.perturbation_profile(grid)
        nilpotent = pointwise.constant_field(nilpotent_direction(), shape)
        identity = pointwise.constant_field(np.eye(4), shape)
        conjugator = identity + amplitude * nilpotent
        conjugator_inverse = identity - amplitude * nilpotent
        almost_complex = pointwise.matmul(
            pointwise.matmul(conjugator, pointwise.constant_field(standard_j(), shape)), conjugator_inverse
        )
        return almost_complex, conjugator

    def perturbation_limit(self, grid: GridSpec) -> float:
        """
        Largest epsilon for which the standard omega still tames the perturbed J,
        found by bisection on the pointwise taming margin.
        """
        low, high = 0.0, 1.0
        while self._tames(grid, high):
            low, high = high, 2.0 * high
            if high > 1e6:
                return float("inf")
        for _ in range(BISECTION_STEPS):
            middle = 0.5 * (low + high)
            if self._tames(grid, middle):
                low = middle
            else:
                high = middle
        return low

    def _tames(self, grid: GridSpec, epsilon: float) -> bool:
        almost_complex, _ = self._perturbed_structure(grid, epsilon)
        omega = FormField.constant(2, standard_omega(), grid.shape).components
        margin, _ = taming_margins(almost_complex, omega)
        return margin > 0.0

    # pylint: disable=too-many-arguments,too-many-locals
    def _assemble(
        self,
        name: str,
        grid: GridSpec,
        params: Mapping[str, float],
        structure: np.ndarray,
        almost_complex: np.ndarray,
        omega: np.ndarray,
        anchors: np.ndarray,
        flags: Mapping[str, bool],
        eps_max: float | None = None,
    ) -> ManifoldSpec:
        shape = grid.shape
        identity = np.eye(4).reshape((4, 4) + (1,) * len(shape))
        j_squared = float(np.max(np.abs(pointwise.matmul(almost_complex, almost_complex) + identity)))
        if j_squared > J_SQUARED_TOLERANCE:
            raise NumericalError(f"J^2 + 1 residual {j_squared:.3e} on {name}")

        omega_field = FormField.constant(2, omega, shape).components
        hermitian = build_hermitian_from_taming(almost_complex, omega_field)
        metric = hermitian.metric
        metric_inverse = pointwise.inverse(metric, what="metric")
        volume_density = np.sqrt(pointwise.determinant(metric))
        frame = dual_coframe(complex_frame(almost_complex, anchors))

        spec = ManifoldSpec(
            name=name,
            grid=grid,
            params=dict(params),
            frame_matrix=np.eye(4),
            structure=structure,
            structure_matrices=exterior_structure_matrices(structure),
            almost_complex=almost_complex,
            omega=omega_field,
            fundamental_form=hermitian.fundamental_form,
            omega_minus=hermitian.omega_minus,
            metric=metric,
            metric_inverse=metric_inverse,
            volume_density=volume_density,
            metric_compounds=tuple(pointwise.compound(metric_inverse, p) for p in range(5)),
            inverse_metric_compounds=tuple(pointwise.compound(metric, p) for p in range(5)),
            j_compounds=tuple(pointwise.compound(almost_complex, p) for p in range(5)),
            frame=frame,
            integrable=bool(flags["integrable"]),
            kahler=bool(flags["kahler"]),
            unimodular=bool(flags["unimodular"]),
            taming_margin=hermitian.taming_margin,
            eps_max=eps_max,
            differentiator=SpectralDifferentiator(grid),
            diagnostics={
                "constant_frame": bool(flags["constant_frame"]),
                "j_squared_residual": j_squared,
                "sampled_taming_margin": hermitian.sampled_margin,
                "duality_residual": frame.duality_residual,
                "omega_minus_norm": float(np.max(np.abs(hermitian.omega_minus))),
            },
        )
        for array in (spec.almost_complex, spec.omega, spec.metric, spec.volume_density):
            array.setflags(write=False)
        return spec

    def _check_closed(self, spec: ManifoldSpec):
        # pylint: disable=import-outside-toplevel
        from taming_toolkit.forms.exterior_calculus import ExteriorCalculus

        d_omega = ExteriorCalculus(spec).d(FormField(2, spec.omega))
        residual = d_omega.max_abs()
        spec.diagnostics["closedness_residual"] = residual
        if residual > CLOSEDNESS_TOLERANCE * max(1.0, float(np.max(np.abs(spec.omega)))):
            raise ClosednessError(f"d omega = {residual:.3e} on {spec.name}")


def build_manifold(catalog_id: str, grid: GridSpec, params: Mapping[str, float] | None = None) -> ManifoldSpec:
    """Module level convenience wrapper around ManifoldBuilder.build_manifold."""
    return ManifoldBuilder().build_manifold(catalog_id, grid, params)
