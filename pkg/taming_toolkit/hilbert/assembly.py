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
Fourier-Galerkin truncation: orthonormal bases of mean-zero functions, 1-forms and
the coexact space V = d*(truncated 2-forms), extended when needed so that it contains the
W~ images, and dense matrices of operators on them.
"""

import itertools
import logging
from typing import Callable
from typing import Dict
from typing import List
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.galerkin import GalerkinSpace
from taming_toolkit.dataclass.galerkin import LinearMapMatrix
from taming_toolkit.dataclass.galerkin import TruncatedComplex
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.elliptic.w_operators import WOperatorBuilder
from taming_toolkit.errors import BudgetExceededError
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import ResolutionError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.forms.hodge import HodgeDecomposer
from taming_toolkit.numerics.multi_index import component_count

RANK_TOLERANCE = 1e-10
EXTENSION_RANK_TOLERANCE = 1e-14
IMAGE_LEAKAGE_TOLERANCE = 1e-8
DEFAULT_BUDGET_MB = 512.0
OPERATORS = ("zero", "d0", "w_tilde", "d_plus_j", "d_minus_j", "ahs")


class GalerkinAssembler:
    """
    Builds truncated spaces and operator matrices for one spec.

    Spaces are cached per cutoff; W~ images need one pair of elliptic solves per
    basis function.
    """

    def __init__(
        self,
        spec: ManifoldSpec,
        calculus: ExteriorCalculus | None = None,
        config: EllipticSolveConfig | None = None,
        budget_mb: float = DEFAULT_BUDGET_MB,
    ):
        """
        :param spec: The manifold
        :param calculus: Exterior calculus to reuse
        :param config: Settings of the elliptic solves behind W~
        :param budget_mb: Upper bound on the dense storage of one assembly
        """
        self.spec = spec
        self.calculus = calculus or ExteriorCalculus(spec)
        self.builder = WOperatorBuilder(spec, self.calculus, config)
        self.hodge = HodgeDecomposer(self.calculus)
        self.budget_mb = budget_mb
        self.gram_residuals: Dict[str, float] = {}
        self.kernel_defects: Dict[str, float] = {}
        self._cache: Dict[Tuple[str, int], GalerkinSpace] = {}
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # modes

    def wavevectors(self, cutoff: int) -> List[Tuple[int, ...]]:
        """
        One representative of each pair +-k with 0 < |k|_inf <= cutoff on the active axes.

        :raises ResolutionError: when the cutoff reaches the Nyquist wavenumber
        """
        if cutoff < 0:
            raise ConfigurationError(f"cutoff {cutoff} is negative", key="cutoff")
        if 2 * cutoff >= min(self.spec.grid.active_resolution):
            raise ResolutionError(f"cutoff {cutoff} needs more than {min(self.spec.grid.active_resolution)} points")
        count = len(self.spec.grid.active_coordinates)
        vectors = []
        for vector in itertools.product(range(-cutoff, cutoff + 1), repeat=count):
            nonzero = [entry for entry in vector if entry]
            if nonzero and nonzero[0] > 0:
                vectors.append(vector)
        return vectors

    def scalar_modes(self, cutoff: int, include_constant: bool) -> np.ndarray:
        """Real Fourier modes cos, sin of the wavevectors, stacked (n, *shape)."""
        differentiator = self.spec.differentiator
        modes = [np.ones(self.spec.shape)] if include_constant else []
        for vector in self.wavevectors(cutoff):
            modes.append(differentiator.fourier_mode(vector, "cos"))
            modes.append(differentiator.fourier_mode(vector, "sin"))
        if not modes:
            return np.zeros((0,) + self.spec.shape)
        return np.stack(modes)

    def _check_budget(self, count: int, degree: int):
        megabytes = count * component_count(degree) * self.spec.grid.size * 8 / 2**20
        if megabytes > self.budget_mb:
            raise BudgetExceededError(
                f"{count} basis {degree}-forms need {megabytes:.1f} MB, budget is {self.budget_mb:.1f} MB"
            )

    def _form_modes(self, cutoff: int, degree: int) -> np.ndarray:
        modes = self.scalar_modes(cutoff, include_constant=True)
        count = component_count(degree)
        self._check_budget(len(modes) * count, degree)
        stacked = np.zeros((len(modes) * count, count) + self.spec.shape)
        for index, mode in enumerate(modes):
            for component in range(count):
                stacked[index * count + component, component] = mode
        return stacked

    # ------------------------------------------------------------------
    # inner products

    def lowered(self, components: np.ndarray, degree: int) -> np.ndarray:
        """w * mu * G_p applied to a stack of forms, so that Gram = A . lowered(B)."""
        weight = self.spec.volume_density * self.spec.grid.cell_weight
        return np.einsum("ij...,nj...->ni...", self.spec.metric_compounds[degree], components) * weight

    def gram(self, left: np.ndarray, right: np.ndarray, degree: int) -> np.ndarray:
        """Real L2 Gram matrix (len(left), len(right))."""
        width = component_count(degree) * self.spec.grid.size
        lowered = self.lowered(right, degree)
        return np.real(left.reshape(left.shape[0], width) @ lowered.reshape(lowered.shape[0], width).T)

    def orthonormalize(
        self, components: np.ndarray, degree: int, label: str, rank_tolerance: float = RANK_TOLERANCE
    ) -> GalerkinSpace:
        """Rank-revealing orthonormalization through the eigen-decomposition of the Gram matrix."""
        if components.shape[0] == 0:
            self.gram_residuals[label] = 0.0
            return GalerkinSpace(degree, components, label)
        gram = self.gram(components, components, degree)
        values, vectors = np.linalg.eigh(0.5 * (gram + gram.T))
        keep = values > rank_tolerance * max(float(values[-1]), 1e-300)
        coefficients = vectors[:, keep] / np.sqrt(values[keep])
        basis = np.tensordot(coefficients.T, components, axes=(1, 0))
        check = self.gram(basis, basis, degree)
        residual = float(np.max(np.abs(check - np.eye(len(basis))))) if len(basis) else 0.0
        self.gram_residuals[label] = residual
        self._logger.debug("%s: %d of %d directions kept, gram residual %.2e", label, len(basis), len(gram), residual)
        return GalerkinSpace(degree, basis, label)

    def coordinates(self, space: GalerkinSpace, components: np.ndarray) -> np.ndarray:
        """Coordinates (dim space, n) of a stack of forms in an orthonormal space."""
        return self.gram(space.components, components, space.degree)

    def images(self, space: GalerkinSpace, operator: Callable[[FormField], FormField]) -> GalerkinSpace:
        """Applies an operator to every basis form."""
        results = [operator(space.form(index)) for index in range(space.dimension)]
        if not results:
            return GalerkinSpace(space.degree, np.zeros((0,) + space.components.shape[1:]), space.label + "_images")
        degree = results[0].degree
        return GalerkinSpace(degree, np.stack([np.real(form.components) for form in results]), space.label + "_images")

    def image_factor(self, grams: List[np.ndarray]) -> np.ndarray:
        """
        diag(sqrt(lambda)) U^T for the summed Gram matrix U diag(lambda) U^T of images,
        so that |factor x| equals the norm of the image of x.
        """
        total = sum(grams)
        if total.shape[0] == 0:
            return np.zeros((0, 0))
        values, vectors = np.linalg.eigh(0.5 * (total + total.T))
        keep = values > RANK_TOLERANCE * max(float(values[-1]), 1e-300)
        return np.sqrt(values[keep])[:, np.newaxis] * vectors[:, keep].T

    # ------------------------------------------------------------------
    # spaces

    def _cached(self, label: str, cutoff: int, build: Callable[[], GalerkinSpace]) -> GalerkinSpace:
        key = (label, cutoff)
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def function_space(self, cutoff: int) -> GalerkinSpace:
        """H1: mean-zero functions with 0 < |k|_inf <= cutoff."""

        def build():
            modes = self.scalar_modes(cutoff, include_constant=False)
            density = self.spec.volume_density
            means = np.array([self.spec.integrate(density * mode) for mode in modes]) / self.spec.integrate(density)
            centered = modes - means.reshape((-1,) + (1,) * len(self.spec.shape))
            return self.orthonormalize(centered[:, np.newaxis], 0, f"functions_K{cutoff}")

        return self._cached("functions", cutoff, build)

    def one_form_space(self, cutoff: int) -> GalerkinSpace:
        """All 1-forms with Fourier components |k|_inf <= cutoff."""
        return self._cached(
            "one_forms", cutoff, lambda: self.orthonormalize(self._form_modes(cutoff, 1), 1, f"one_forms_K{cutoff}")
        )

    def coexact_space(self, cutoff: int) -> GalerkinSpace:
        """V = d* of the truncated 2-forms."""

        def build():
            raw = self._form_modes(cutoff, 2)
            images = np.stack([self.calculus.d_star(FormField(2, form)).components for form in raw])
            return self.orthonormalize(images, 1, f"coexact_K{cutoff}")

        return self._cached("coexact", cutoff, build)

    def exact_space(self, cutoff: int) -> GalerkinSpace:
        """d of the mean-zero functions."""
        functions = self.function_space(cutoff)
        return self._cached(
            "exact",
            cutoff,
            lambda: self.orthonormalize(
                self.images(functions, self.calculus.d).components, 1, f"exact_K{cutoff}"
            ),
        )

    def harmonic_space(self) -> GalerkinSpace:
        """Numerically harmonic 1-forms."""

        def build():
            forms = self.hodge.harmonic_basis
            if not forms:
                return GalerkinSpace(1, np.zeros((0, 4) + self.spec.shape), "harmonic")
            return self.orthonormalize(np.stack([np.real(form.components) for form in forms]), 1, "harmonic")

        return self._cached("harmonic", 0, build)

    # ------------------------------------------------------------------
    # complexes

    def w_tilde_images(self, functions: GalerkinSpace) -> GalerkinSpace:
        """W~ h for every basis function h; the worst sigma kernel defect lands in kernel_defects."""
        images = self.images(functions, lambda form: self.builder.build_W_tilde(form.values))
        context = f"W~ images of {functions.label} on {self.spec.name}"
        self.kernel_defects[functions.label] = self.builder.lejmi.flush_kernel_defects(context)
        return images

    def _without(self, space: GalerkinSpace, components: np.ndarray) -> np.ndarray:
        return components - np.tensordot(self.coordinates(space, components).T, space.components, axes=(1, 0))

    def image_closure(self, middle: GalerkinSpace, images: GalerkinSpace, label: str) -> Tuple[GalerkinSpace, float]:
        """
        Extends an orthonormal coexact space by the coexact parts of the images it misses.
        With non-constant J, W~ of a K-band function has Fourier content above K, so the
        truncated coexact space alone does not contain im W~.

        :return: The extended space and the worst relative leakage of the images out of middle
        """
        coordinates = self.coordinates(middle, images.components)
        remainders = []
        worst = 0.0
        for index in range(images.dimension):
            image = images.form(index)
            size = self.calculus.norm(image)
            if size == 0.0:
                continue
            remainder = image - middle.combine(coordinates[:, index])
            ratio = self.calculus.norm(remainder) / size
            worst = max(worst, ratio)
            if ratio > IMAGE_LEAKAGE_TOLERANCE:
                remainders.append(remainder)
        if not remainders:
            return middle, worst

        self._check_budget(middle.dimension + len(remainders), 1)
        # exact and harmonic parts are invisible to d and d-_J
        coexact = np.stack([np.real(self.hodge.decompose(remainder)[2].components) for remainder in remainders])
        extra = self.orthonormalize(
            self._without(middle, coexact), 1, label + "_extension", rank_tolerance=EXTENSION_RANK_TOLERANCE
        )
        # second pass restores orthogonality lost on the small eigenvalues of the first
        extra = self.orthonormalize(self._without(middle, extra.components), 1, label + "_extension")
        self._logger.info(
            "%s misses W~ images by %.3e, extended by %d directions", middle.label, worst, extra.dimension
        )
        extended = GalerkinSpace(1, np.concatenate([middle.components, extra.components]), label)
        check = self.gram(extended.components, extended.components, 1)
        self.gram_residuals[label] = float(np.max(np.abs(check - np.eye(extended.dimension))))
        return extended, worst

    def complex_on(self, middle: GalerkinSpace, functions: GalerkinSpace, images: GalerkinSpace, cutoff: int):
        """
        (T, S) = (W~ projected to middle, d-_J on middle) with leakage and composite diagnostics.
        """
        t_matrix = self.coordinates(middle, images.components)
        leakage = 0.0
        for index in range(images.dimension):
            image = images.form(index)
            size = self.calculus.norm(image)
            if size > 0.0:
                remainder = image - middle.combine(t_matrix[:, index])
                leakage = max(leakage, self.calculus.norm(remainder) / size)

        minus = self.images(middle, lambda form: self.calculus.d_pm_j(form)[1])
        s_factor = self.image_factor([self.gram(minus.components, minus.components, 2)])
        t_norm = float(np.linalg.norm(t_matrix, 2)) if t_matrix.size else 0.0
        composite = float(np.linalg.norm(s_factor @ t_matrix, 2)) if s_factor.size and t_matrix.size else 0.0
        return TruncatedComplex(
            cutoff=cutoff,
            operator_id="w_tilde",
            t_map=LinearMapMatrix("w_tilde", t_matrix),
            s_map=LinearMapMatrix("d_minus_j", s_factor, implicit_codomain=True),
            domain=functions,
            middle=middle,
            t_images=images,
            diagnostics={
                "image_leakage": leakage,
                "composite_norm": composite / t_norm if t_norm else composite,
                "gram_residual": max(self.gram_residuals.values(), default=0.0),
            },
            provenance={"spec": self.spec.name, "grid": self.spec.grid.to_dict(), "cutoff": cutoff},
        )

    def assemble(self, operator_id: str, cutoff: int) -> TruncatedComplex:
        """
        :param operator_id: One of OPERATORS
        :param cutoff: Fourier cutoff K
        :return: The truncated complex; for single operators S is empty
        """
        if operator_id not in OPERATORS:
            raise ConfigurationError(f"unknown operator '{operator_id}', expected one of {OPERATORS}", key="operator")
        provenance = {"spec": self.spec.name, "grid": self.spec.grid.to_dict(), "cutoff": cutoff}

        if operator_id == "w_tilde":
            functions = self.function_space(cutoff)
            images = self.w_tilde_images(functions)
            coexact = self.coexact_space(cutoff)
            middle, missed = self.image_closure(coexact, images, f"coexact_w_tilde_K{cutoff}")
            cx = self.complex_on(middle, functions, images, cutoff)
            cx.diagnostics["truncation_leakage"] = missed
            cx.diagnostics["extension_dimension"] = float(middle.dimension - coexact.dimension)
            cx.diagnostics["sigma_kernel_defect"] = self.kernel_defects.get(functions.label, 0.0)
            return cx

        if operator_id in ("zero", "d0"):
            domain = self.function_space(cutoff)
            if operator_id == "zero":
                t_matrix = np.zeros((0, domain.dimension))
                middle = None
            else:
                images = self.images(domain, self.calculus.d)
                middle = self.orthonormalize(images.components, 1, f"exact_K{cutoff}")
                t_matrix = self.coordinates(middle, images.components)
            return TruncatedComplex(
                cutoff=cutoff,
                operator_id=operator_id,
                t_map=LinearMapMatrix(operator_id, t_matrix),
                s_map=LinearMapMatrix("zero", np.zeros((0, t_matrix.shape[0]))),
                domain=domain,
                middle=middle,
                diagnostics={"gram_residual": max(self.gram_residuals.values(), default=0.0)},
                provenance=provenance,
            )

        domain = self.one_form_space(cutoff)
        grams = []
        if operator_id in ("d_plus_j", "d_minus_j"):
            slot = 0 if operator_id == "d_plus_j" else 1
            images = self.images(domain, lambda form: self.calculus.d_pm_j(form)[slot])
            grams.append(self.gram(images.components, images.components, 2))
        else:
            plus = self.images(domain, self.calculus.d_plus)
            star = self.images(domain, self.calculus.d_star)
            grams.append(self.gram(plus.components, plus.components, 2))
            grams.append(self.gram(star.components, star.components, 0))
        factor = self.image_factor(grams)
        return TruncatedComplex(
            cutoff=cutoff,
            operator_id=operator_id,
            t_map=LinearMapMatrix(operator_id, factor, implicit_codomain=True),
            s_map=LinearMapMatrix("zero", np.zeros((0, factor.shape[0]))),
            domain=domain,
            diagnostics={"gram_residual": max(self.gram_residuals.values(), default=0.0)},
            provenance=provenance,
        )
