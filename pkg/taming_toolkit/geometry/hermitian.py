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
Hermitian data induced by a taming pair (J, omega).
"""

import logging
from dataclasses import dataclass

import numpy as np

from taming_toolkit.errors import TamingViolationError
from taming_toolkit.numerics import pointwise

DIRECTION_SAMPLES = 64
DIRECTION_SEED = 20240517

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HermitianData:
    """F = omega^(1,1), omega_minus = omega - F, metric g(v, w) = F(v, Jw) and the taming margin."""

    fundamental_form: np.ndarray
    omega_minus: np.ndarray
    metric: np.ndarray
    taming_margin: float
    sampled_margin: float


def j_act_two_form(almost_complex: np.ndarray, components: np.ndarray) -> np.ndarray:
    """(J beta)(v, w) = beta(Jv, Jw) on 2-form components."""
    return pointwise.apply_transpose(pointwise.compound(almost_complex, 2), components)


def taming_margins(almost_complex: np.ndarray, omega: np.ndarray) -> tuple[float, float]:
    """
    :param almost_complex: J as a (4, 4, *shape) field
    :param omega: 2-form components (6, *shape)
    :return: (min over the grid of the smallest eigenvalue of sym(omega J),
              min over a fixed direction sample of omega(v, Jv) / |v|^2)
    """
    omega_j = pointwise.matmul(pointwise.two_form_to_matrix(omega), almost_complex)
    symmetric = pointwise.symmetric_part(omega_j)
    margin = float(np.min(pointwise.min_eigenvalue(symmetric)))

    rng = np.random.default_rng(DIRECTION_SEED)
    directions = rng.standard_normal((DIRECTION_SAMPLES, 4))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    sampled = np.einsum("na,ab...,nb->n...", directions, omega_j, directions)
    return margin, float(np.min(sampled))


def build_hermitian_from_taming(almost_complex: np.ndarray, omega: np.ndarray) -> HermitianData:
    """
    Splits a taming form into its J-invariant and J-anti-invariant parts and builds g.

    :param almost_complex: J as a (4, 4, *shape) frame-matrix field
    :param omega: Closed 2-form components (6, *shape)
    :return: HermitianData
    :raises TamingViolationError: when omega(v, Jv) > 0 fails anywhere
    """
    margin, sampled = taming_margins(almost_complex, omega)
    if margin <= 0.0 or sampled <= 0.0:
        raise TamingViolationError(f"omega does not tame J: margin {margin:.3e}, sampled {sampled:.3e}")

    fundamental = 0.5 * (omega + j_act_two_form(almost_complex, omega))
    omega_minus = omega - fundamental
    metric = pointwise.matmul(pointwise.two_form_to_matrix(fundamental), almost_complex)
    asymmetry = float(np.max(np.abs(metric - pointwise.transpose(metric))))
    logger.debug("taming margin %.6f, metric asymmetry %.3e", margin, asymmetry)
    metric = pointwise.symmetric_part(metric)
    if float(np.min(pointwise.min_eigenvalue(metric))) <= 0.0:
        raise TamingViolationError("induced metric F(., J.) is not positive definite")
    return HermitianData(
        fundamental_form=fundamental,
        omega_minus=omega_minus,
        metric=metric,
        taming_margin=margin,
        sampled_margin=sampled,
    )
