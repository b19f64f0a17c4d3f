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
Discrete constant of ||a||_{L2_1} <= C (||(d+ + d*) a|| + ||a_h||) on truncated 1-forms.
"""

import logging

import numpy as np
import scipy.linalg

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.galerkin import EstimateReport
from taming_toolkit.errors import EmptySpaceError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.hilbert.assembly import GalerkinAssembler

logger = logging.getLogger(__name__)


def sobolev_gram(assembler: GalerkinAssembler, components: np.ndarray) -> np.ndarray:
    """Gram matrix of ||a||^2 + sum_b ||E_b a||^2, derivatives taken componentwise."""
    gram = assembler.gram(components, components, 1)
    for index in range(4):
        derived = assembler.spec.derivative(components, index)
        if np.any(derived):
            gram = gram + assembler.gram(derived, derived, 1)
    return gram


def ahs_constant(assembler: GalerkinAssembler, cutoff: int) -> EstimateReport:
    """
    Smallest generalized eigenvalue of (||d+ a||^2 + ||d* a||^2 + ||a_h||^2, ||a||_{L2_1}^2)
    on 1-forms with |k|_inf <= cutoff; C = 1/sqrt of it. The squared form is the
    quadratic variant, so the sum-of-norms constant lies in [C / sqrt 2, C].
    provenance["ahs_bound"] carries 2 C, the factor the global estimate inherits.
    """
    domain = assembler.one_form_space(cutoff)
    if domain.dimension == 0:
        raise EmptySpaceError("no 1-forms below the cutoff")
    calculus = assembler.calculus
    plus = assembler.images(domain, calculus.d_plus)
    star = assembler.images(domain, calculus.d_star)
    harmonic = assembler.harmonic_space()
    projections = assembler.coordinates(harmonic, domain.components)

    energy = (
        assembler.gram(plus.components, plus.components, 2)
        + assembler.gram(star.components, star.components, 0)
        + projections.T @ projections
    )
    norm = sobolev_gram(assembler, domain.components)
    values, vectors = scipy.linalg.eigh(0.5 * (energy + energy.T), 0.5 * (norm + norm.T))
    smallest = float(values[0])
    constant = 1.0 / np.sqrt(smallest)
    logger.info("AHS constant on %s at K=%d: %.6f", assembler.spec.name, cutoff, constant)
    return EstimateReport(
        constant=float(constant),
        constant_sum_lower=float(constant / np.sqrt(2.0)),
        constant_sum_upper=float(constant),
        smallest_eigenvalue=smallest,
        minimizer=vectors[:, 0],
        cutoff=cutoff,
        provenance={
            "spec": assembler.spec.name,
            "grid": assembler.spec.grid.to_dict(),
            "ahs_bound": float(2.0 * constant),
            "harmonic_dimension": harmonic.dimension,
        },
    )


def harmonic_part(assembler: GalerkinAssembler, alpha: FormField) -> FormField:
    """a_h, the projection onto the numerically harmonic 1-forms."""
    harmonic = assembler.harmonic_space()
    coordinates = assembler.coordinates(harmonic, np.real(alpha.components)[np.newaxis])[:, 0]
    return harmonic.combine(coordinates)


def dplus_decomposition_check(calculus: ExteriorCalculus, alpha: FormField) -> float:
    """Relative residual of d+ a = d-_J a + (Lambda_F d+_J a) F / 2."""
    return calculus.d_plus_decomposition_residual(alpha)
