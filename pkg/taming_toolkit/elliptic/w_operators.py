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
The corrected operators on mean-zero functions:

    W f  = J df + d* sigma1            with P-_J d W f = 0
    W~ f = d*(f omega + sigma1 + sigma2) with d* W~ f = 0 and P-_J d W~ f = 0
    D~ f = d W~ f

sigma1, sigma2 are J-anti-invariant and found with Lejmi's operator. omega- = omega - F
stands in wherever the potential of the anti-invariant part of omega would appear.
"""

import logging
from typing import Dict
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.dataclass.w_bundle import SigmaSolve
from taming_toolkit.dataclass.w_bundle import WBundle
from taming_toolkit.elliptic.lejmi import LejmiOperator
from taming_toolkit.errors import PreconditionError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus

ADJOINT_PRECONDITION_TOLERANCE = 1e-6


class WOperatorBuilder:
    """
    Builds W, W~ and D~ for functions on one spec, and applies their adjoints.
    """

    def __init__(
        self, spec: ManifoldSpec, calculus: ExteriorCalculus | None = None, config: EllipticSolveConfig | None = None
    ):
        """
        :param spec: The manifold
        :param calculus: Exterior calculus to reuse
        :param config: Settings of the sigma solves
        """
        self.spec = spec
        self.calculus = calculus or ExteriorCalculus(spec)
        self.config = config or EllipticSolveConfig()
        self.lejmi = LejmiOperator(spec, self.calculus, self.config)
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # inputs

    def mean(self, f: np.ndarray) -> float:
        """vol_g-weighted mean."""
        density = self.spec.volume_density
        return float(np.real(self.spec.integrate(density * f) / self.spec.integrate(density)))

    def prepare(self, f: np.ndarray) -> Tuple[np.ndarray, float]:
        """
        :return: (dealiased mean-zero copy of f, the mean that was removed)
        """
        values = self.spec.differentiator.dealias(np.asarray(f, dtype=float))
        mean = self.mean(values)
        return values - mean, mean

    def j_df(self, f: np.ndarray) -> FormField:
        """J df"""
        return self.calculus.j_act(self.calculus.d(FormField.scalar(f)))

    def _size(self, form: FormField) -> float:
        return float(np.linalg.norm(np.sqrt(self.spec.volume_density) * form.components))

    # ------------------------------------------------------------------
    # corrections

    def solve_sigma1(self, f: np.ndarray) -> SigmaSolve:
        """sigma1 in A-_J with P-_J d(J df + d* sigma1) = 0, minimal norm."""
        source = self.calculus.d(self.j_df(f))
        return self.lejmi.solve(-self.lejmi.coordinates(source), self._size(source), label="sigma1")

    def solve_sigma2(self, f: np.ndarray, sigma1: SigmaSolve) -> SigmaSolve:
        """sigma2 in A-_J with P-_J d d*(f omega + sigma1 + sigma2) = 0, minimal norm."""
        potential = self.calculus.omega() * f + sigma1.form
        source = self.calculus.d(self.calculus.d_star(potential))
        return self.lejmi.solve(-self.lejmi.coordinates(source), self._size(source), label="sigma2")

    # ------------------------------------------------------------------
    # operators

    def build_W(self, f: np.ndarray, sigma1: SigmaSolve | None = None) -> FormField:
        """W f = J df + d* sigma1"""
        sigma1 = sigma1 or self.solve_sigma1(f)
        return self.j_df(f) + self.calculus.d_star(sigma1.form)

    def build_W_tilde(
        self, f: np.ndarray, sigma1: SigmaSolve | None = None, sigma2: SigmaSolve | None = None
    ) -> FormField:
        """W~ f = d*(f omega + sigma1 + sigma2); J df on Kaehler specs."""
        if self.spec.kahler:
            return self.j_df(f)
        sigma1 = sigma1 or self.solve_sigma1(f)
        sigma2 = sigma2 or self.solve_sigma2(f, sigma1)
        return self.calculus.d_star(self.calculus.omega() * f + sigma1.form + sigma2.form)

    def apply_D_tilde(self, f: np.ndarray) -> FormField:
        """D~ f = d W~ f"""
        return self.calculus.d(self.build_W_tilde(f))

    def bundle(self, f: np.ndarray) -> WBundle:
        """
        All operators for one f with their posted residuals.

        :param f: Scalar field; its mean and Nyquist content are removed first
        """
        values, mean = self.prepare(f)
        sigma1 = self.solve_sigma1(values)
        sigma2 = self.solve_sigma2(values, sigma1)
        w = self.build_W(values, sigma1)
        w_tilde = self.build_W_tilde(values, sigma1, sigma2)
        d_tilde = self.calculus.d(w_tilde)
        self.lejmi.flush_kernel_defects(f"W bundle on {self.spec.name}")

        reference = self.calculus.norm(self.calculus.d(self.j_df(values)))
        reference = reference or self.calculus.norm(self.j_df(values)) or 1.0
        w_tilde_norm = self.calculus.norm(w_tilde) or 1.0
        residuals = {
            "d_minus_W": self.calculus.norm(self.calculus.project_minus_j(self.calculus.d(w))) / reference,
            "d_star_W_tilde": self.calculus.norm(self.calculus.d_star(w_tilde)) / w_tilde_norm,
            "d_minus_W_tilde": self.calculus.norm(self.calculus.project_minus_j(d_tilde)) / reference,
            "sigma1_solver": sigma1.relative_residual,
            "sigma2_solver": sigma2.relative_residual,
        }
        defects = {
            "mean_removed": abs(mean),
            "sigma1_kernel_orthogonality": sigma1.kernel_defect,
            "sigma2_kernel_orthogonality": sigma2.kernel_defect,
        }
        self._logger.info(
            "W bundle on %s: sigma1 %d its, sigma2 %d its, max residual %.3e",
            self.spec.name,
            sigma1.iterations,
            sigma2.iterations,
            max(residuals.values()),
        )
        return WBundle(values, sigma1, sigma2, w, w_tilde, d_tilde, residuals, defects)

    # ------------------------------------------------------------------
    # adjoints

    def _check_precondition(self, name: str, defect: FormField, alpha: FormField, tolerance: float):
        scale = max(self.calculus.norm(alpha), self.calculus.norm(self.calculus.d(alpha)), 1e-300)
        relative = self.calculus.norm(defect) / scale
        if relative > tolerance:
            raise PreconditionError(f"{name} = {relative:.3e} relative, adjoint formula does not apply")

    def adjoint_W_tilde(self, alpha: FormField, tolerance: float = ADJOINT_PRECONDITION_TOLERANCE) -> np.ndarray:
        """
        W~*(a) = Lambda_F d+_J a, valid for d* a = 0 and d-_J a = 0.

        :raises PreconditionError: when either condition fails beyond tolerance
        """
        plus_j, minus_j = self.calculus.d_pm_j(alpha)
        self._check_precondition("d* a", self.calculus.d_star(alpha), alpha, tolerance)
        self._check_precondition("d-_J a", minus_j, alpha, tolerance)
        result = self.calculus.lambda_contract(plus_j)
        return np.real(result) if alpha.is_real else result

    def adjoint_W(self, alpha: FormField, tolerance: float = ADJOINT_PRECONDITION_TOLERANCE) -> np.ndarray:
        """
        W*(a) = 2 (d+_J a ^ F - a ^ dF) / F ^ F, valid for d-_J a = 0.
        """
        plus_j, minus_j = self.calculus.d_pm_j(alpha)
        self._check_precondition("d-_J a", minus_j, alpha, tolerance)
        fundamental = self.calculus.fundamental_form()
        numerator = self.calculus.wedge(plus_j, fundamental) - self.calculus.wedge(
            alpha, self.calculus.d(fundamental)
        )
        result = 2.0 * numerator.values / self.calculus.wedge(fundamental, fundamental).values
        return np.real(result) if alpha.is_real else result

    # ------------------------------------------------------------------
    # identities

    def w_identity_residuals(self, f: np.ndarray, bundle: WBundle | None = None) -> Dict[str, float]:
        """
        d*(f omega) = J df - *(df ^ omega-), d*(f F) = J df - f *dF and the Stokes
        balance of D~ f against F, as relative residuals.
        """
        values, _ = self.prepare(f)
        calculus = self.calculus
        df = calculus.d(FormField.scalar(values))
        j_df = calculus.j_act(df)
        scale = calculus.norm(j_df) or 1.0

        chain = calculus.d_star(calculus.omega() * values) - (
            j_df - calculus.hodge_star(calculus.wedge(df, calculus.omega_minus()))
        )
        fundamental = calculus.fundamental_form()
        fundamental_chain = calculus.d_star(fundamental * values) - (
            j_df - calculus.hodge_star(calculus.d(fundamental)) * values
        )

        bundle = bundle or self.bundle(values)
        left = float(np.real(calculus.integrate_top(calculus.wedge(bundle.d_tilde, fundamental))))
        right = float(np.real(calculus.integrate_top(calculus.wedge(bundle.w_tilde, calculus.d(fundamental)))))
        stokes_scale = max(calculus.norm(bundle.d_tilde), 1e-300)
        return {
            "d_star_f_omega_chain": calculus.norm(chain) / scale,
            "d_star_f_F_chain": calculus.norm(fundamental_chain) / scale,
            "stokes_d_tilde_F": abs(left - right) / stokes_scale,
            "d_tilde_F_pairing": float(np.real(calculus.inner(bundle.d_tilde, fundamental))),
        }
