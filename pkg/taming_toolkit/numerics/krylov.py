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
Matrix-free conjugate gradients over flattened field unknowns.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.sparse.linalg import LinearOperator
from scipy.sparse.linalg import cg

from taming_toolkit.errors import SolverDivergenceError

logger = logging.getLogger(__name__)

# accept a stalled solve when its true residual is within this factor of the target
STALL_FACTOR = 100.0


@dataclass(frozen=True)
class KrylovResult:
    """Solution vector with iteration count and the achieved relative residual."""

    solution: np.ndarray
    iterations: int
    relative_residual: float


def solve_symmetric(
    apply: Callable[[np.ndarray], np.ndarray],
    rhs: np.ndarray,
    rtol: float,
    max_iterations: int,
    preconditioner: Callable[[np.ndarray], np.ndarray] | None = None,
    label: str = "cg",
) -> KrylovResult:
    """
    Solves A x = b for a symmetric positive semi-definite A given as a callable,
    starting from zero so that consistent singular systems return the minimal-norm solution.

    :param apply: x -> A x on flat real vectors
    :param rhs: Flat right-hand side
    :param rtol: Relative residual target
    :param max_iterations: Iteration cap
    :param preconditioner: Optional symmetric positive definite M^-1 application
    :param label: Name used in log and error messages
    :return: KrylovResult
    :raises SolverDivergenceError: when the residual target is missed by more than STALL_FACTOR
    """
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return KrylovResult(np.zeros_like(rhs), 0, 0.0)

    size = rhs.size
    operator = LinearOperator((size, size), matvec=apply, dtype=rhs.dtype)
    inverse = None
    if preconditioner is not None:
        inverse = LinearOperator((size, size), matvec=preconditioner, dtype=rhs.dtype)

    counter = {"iterations": 0}

    def count(_):
        counter["iterations"] += 1

    solution, info = cg(operator, rhs, rtol=rtol, atol=0.0, maxiter=max_iterations, M=inverse, callback=count)
    residual = float(np.linalg.norm(apply(solution) - rhs)) / rhs_norm
    logger.debug("%s: %d iterations, relative residual %.3e", label, counter["iterations"], residual)
    if info < 0 or (info > 0 and residual > STALL_FACTOR * rtol):
        raise SolverDivergenceError(
            f"{label} stopped after {counter['iterations']} iterations with relative residual {residual:.3e}"
        )
    return KrylovResult(solution, counter["iterations"], residual)
