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
Global D~-exactness of d-exact (1,1)-forms at finite cutoff.

Given a 1-form a with d-_J a = 0, the pipeline finds f with D~ f = da by solving
W~ f = a on the coexact space V through the Hoermander machinery, and cross-checks
the answer with a direct least-squares solve of D~ f = da.
"""

import logging
import time
from typing import Any
from typing import Dict
from typing import Tuple

import numpy as np
import scipy.linalg

from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.galerkin import GalerkinSpace
from taming_toolkit.dataclass.galerkin import SolveReport
from taming_toolkit.dataclass.galerkin import TruncatedComplex
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import EmptySpaceError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.hilbert.assembly import GalerkinAssembler
from taming_toolkit.hilbert.estimates import SINGULAR_TOLERANCE
from taming_toolkit.hilbert.estimates import best_constant
from taming_toolkit.hilbert.estimates import hormander_solve
from taming_toolkit.hilbert.estimates import null_space

WIDENINGS = ("harmonic", "exact")
CLOSED_TOLERANCE = 1e-10
HORMANDER_TOLERANCE = 1e-6
KERNEL_SLACK = 10.0
EMPTY_TOLERANCE = 1e-8


class Theorem1Pipeline:
    """
    Runs the exactness pipeline for 1-forms on one spec at one cutoff.
    """

    def __init__(
        self,
        spec: ManifoldSpec,
        cutoff: int,
        calculus: ExteriorCalculus | None = None,
        config: EllipticSolveConfig | None = None,
        assembler: GalerkinAssembler | None = None,
    ):
        """
        :param spec: The manifold
        :param cutoff: Fourier cutoff of H1 and V
        :param calculus: Exterior calculus to reuse
        :param config: Settings of the elliptic solves
        :param assembler: Assembler to reuse, e.g. across several inputs
        """
        self.spec = spec
        self.cutoff = cutoff
        self.calculus = calculus or ExteriorCalculus(spec)
        self.assembler = assembler or GalerkinAssembler(spec, self.calculus, config)
        self._complex: TruncatedComplex | None = None
        self._d_tilde_images: GalerkinSpace | None = None
        self._logger = logging.getLogger(self.__class__.__name__)

    @property
    def complex(self) -> TruncatedComplex:
        """(W~, d-_J) on (H1, V), assembled on first use."""
        if self._complex is None:
            self._complex = self.assembler.assemble("w_tilde", self.cutoff)
        return self._complex

    @property
    def d_tilde_images(self) -> GalerkinSpace:
        """D~ h = d W~ h for the basis functions h."""
        if self._d_tilde_images is None:
            self._d_tilde_images = self.assembler.images(self.complex.t_images, self.calculus.d)
        return self._d_tilde_images

    def poincare_constant(self) -> float:
        """Smallest C_P with ||a|| <= C_P ||da|| on V."""
        middle = self.complex.middle
        images = self.assembler.images(middle, self.calculus.d)
        gram = self.assembler.gram(images.components, images.components, 2)
        smallest = float(np.linalg.eigvalsh(0.5 * (gram + gram.T))[0])
        if smallest <= 0.0:
            raise EmptySpaceError("d is not injective on the truncated coexact space")
        return 1.0 / np.sqrt(smallest)

    def closed_directions(self) -> Tuple[np.ndarray, float]:
        """
        Orthonormal basis of the numerical kernel of S on V. The cut sits above the measured
        size of S on im T, so the W~ images always count as d-_J-closed.

        :return: The basis (dim V, k) and the relative cut on the singular values of S
        """
        cx = self.complex
        s_matrix = cx.s_matrix
        if s_matrix.size == 0:
            return np.eye(cx.middle.dimension), SINGULAR_TOLERANCE
        largest = float(np.linalg.norm(s_matrix, 2))
        range_t = scipy.linalg.orth(cx.t_matrix) if cx.t_matrix.size else np.zeros((cx.middle.dimension, 0))
        floor = float(np.linalg.norm(s_matrix @ range_t, 2)) / largest if range_t.size and largest else 0.0
        rcond = max(SINGULAR_TOLERANCE, KERNEL_SLACK * floor)
        return null_space(s_matrix, cx.middle.dimension, rcond=rcond), rcond

    def run(self, alpha: FormField) -> SolveReport:
        """
        :param alpha: Real 1-form a
        :return: SolveReport whose solution is f on the grid
        """
        started = time.perf_counter()
        cx = self.complex
        middle = cx.middle
        timings = {"assemble": time.perf_counter() - started}

        _, harmonic, coexact = self.assembler.hodge.decompose(alpha)
        coexact_norm = self.calculus.norm(coexact)
        coordinates = self.assembler.coordinates(middle, np.real(coexact.components)[np.newaxis])[:, 0]
        leakage = self.calculus.norm(coexact - middle.combine(coordinates)) / coexact_norm if coexact_norm else 0.0

        kernel, rcond = self.closed_directions()
        kept = kernel @ (kernel.T @ coordinates)
        removed = float(np.linalg.norm(coordinates - kept)) / max(float(np.linalg.norm(coordinates)), 1e-300)
        used = middle.combine(kept)
        psi = self.calculus.d(used)
        psi_norm = self.calculus.norm(psi)
        timings["project"] = time.perf_counter() - started

        estimate = best_constant(cx)
        poincare = self.poincare_constant()
        combined = estimate.constant * poincare

        domain = cx.domain
        da_norm = self.calculus.norm(self.calculus.d(alpha))
        if da_norm <= CLOSED_TOLERANCE * max(self.calculus.norm(alpha), 1e-300):
            return SolveReport(
                name="theorem1",
                solution=np.zeros(self.spec.shape),
                constant=combined,
                cutoff=self.cutoff,
                residuals={"d_tilde": 0.0, "routes_agree": 0.0},
                defects={"coexact_leakage": leakage, "d_minus_removed": removed},
                bounds={"norm_f": 0.0, "c1_times_norm_psi": 0.0, "bound_holds": 1.0},
                provenance=self._provenance(estimate.constant, poincare),
                timings=timings,
            )
        if psi_norm <= EMPTY_TOLERANCE * da_norm:
            raise EmptySpaceError(
                f"projecting out d-_J removed {removed:.3e} of the input on {self.spec.name} K={self.cutoff}, "
                f"|da| = {da_norm:.3e} but nothing is left to solve for"
            )

        s_scale = float(np.linalg.norm(cx.s_matrix, 2)) if cx.s_matrix.size else 0.0
        solve = hormander_solve(cx, kept, tolerance=max(HORMANDER_TOLERANCE, 2.0 * rcond * s_scale))
        coefficients = solve.solution
        images = self.d_tilde_images
        residual = self.calculus.norm(images.combine(coefficients) - psi) / psi_norm
        timings["hormander"] = time.perf_counter() - started

        gram = self.assembler.gram(images.components, images.components, 2)
        rhs = self.assembler.gram(images.components, np.real(psi.components)[np.newaxis], 2)[:, 0]
        direct, _, _, _ = np.linalg.lstsq(gram, rhs, rcond=None)
        agreement = self.calculus.norm(images.combine(coefficients - direct)) / psi_norm
        direct_residual = self.calculus.norm(images.combine(direct) - psi) / psi_norm
        timings["least_squares"] = time.perf_counter() - started

        f_norm = float(np.linalg.norm(coefficients))
        d_minus_used = self.calculus.norm(self.calculus.d_pm_j(used)[1]) / psi_norm
        self._logger.info(
            "theorem1 on %s K=%d: residual %.3e, routes %.3e, |f| %.4f <= %.4f",
            self.spec.name,
            self.cutoff,
            residual,
            agreement,
            f_norm,
            combined * psi_norm,
        )
        return SolveReport(
            name="theorem1",
            solution=domain.combine(coefficients).values,
            constant=combined,
            cutoff=self.cutoff,
            residuals={
                "d_tilde": residual,
                "direct_least_squares": direct_residual,
                "routes_agree": agreement,
                "hormander_range": solve.residuals["range"],
                "d_minus_used": d_minus_used,
            },
            defects={
                "coexact_leakage": leakage,
                "image_leakage": cx.diagnostics.get("image_leakage", 0.0),
                "composite_norm": cx.diagnostics.get("composite_norm", 0.0),
                "d_minus_removed": removed,
                "kernel_cut": rcond,
                "truncation_leakage": cx.diagnostics.get("truncation_leakage", 0.0),
                "harmonic_part": self.calculus.norm(harmonic),
            },
            bounds={
                "norm_f": f_norm,
                "norm_psi": psi_norm,
                "c1_times_norm_psi": combined * psi_norm,
                "bound_holds": float(f_norm <= combined * psi_norm * (1.0 + 1e-9)),
            },
            provenance=self._provenance(estimate.constant, poincare),
            timings=timings,
        )

    def _provenance(self, constant: float, poincare: float) -> Dict[str, Any]:
        return {
            "spec": self.spec.name,
            "grid": self.spec.grid.to_dict(),
            "cutoff": self.cutoff,
            "estimate_constant": constant,
            "poincare_constant": poincare,
            "dimensions": self.complex.dimensions,
        }

    def degeneracy_demo(self, widen: str = "harmonic") -> Dict[str, Any]:
        """
        Widens V by one harmonic 1-form or one exact direction and compares the estimate
        constants; both directions are invisible to T* and S, so the constant blows up.
        """
        if widen not in WIDENINGS:
            raise ConfigurationError(f"unknown widening '{widen}', expected one of {WIDENINGS}", key="widen")
        cx = self.complex
        if widen == "harmonic":
            extra = self.assembler.harmonic_space()
        else:
            extra = self.assembler.exact_space(self.cutoff)
        if extra.dimension == 0:
            raise EmptySpaceError(f"no {widen} direction to widen with")

        stacked = np.concatenate([cx.middle.components, extra.components[:1]])
        widened = self.assembler.orthonormalize(stacked, 1, f"widened_{widen}")
        wide_complex = self.assembler.complex_on(widened, cx.domain, cx.t_images, self.cutoff)
        base = best_constant(cx)
        wide = best_constant(wide_complex)
        inflation = wide.constant / base.constant
        self._logger.info("widening V by a %s direction inflates C by %.3e", widen, inflation)
        return {
            "widen": widen,
            "base_constant": base.constant,
            "widened_constant": wide.constant,
            "inflation": inflation,
            "widened_degenerate": wide.degenerate,
        }
