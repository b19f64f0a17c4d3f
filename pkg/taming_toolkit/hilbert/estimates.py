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
Matrix-level Hoermander machinery on a TruncatedComplex H1 --T--> H2 --S--> H3.
"""

import logging
from typing import Any
from typing import Dict
from typing import List
from typing import Sequence

import numpy as np
import scipy.linalg

from taming_toolkit.dataclass.galerkin import EstimateReport
from taming_toolkit.dataclass.galerkin import SolveReport
from taming_toolkit.dataclass.galerkin import TruncatedComplex
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import EmptySpaceError
from taming_toolkit.errors import NumericalError
from taming_toolkit.errors import PreconditionError
from taming_toolkit.hilbert.assembly import GalerkinAssembler

logger = logging.getLogger(__name__)

DEGENERATE_CONSTANT = 1e12
SINGULAR_TOLERANCE = 1e-9
COLLAPSE_RATIO = 0.5
BOUND_SLACK = 1e-9


def best_constant(cx: TruncatedComplex) -> EstimateReport:
    """
    Smallest C with ||h||^2 <= C^2 (||T* h||^2 + ||S h||^2) on H2.

    :raises EmptySpaceError: when H2 is trivial
    """
    t_matrix, s_matrix = cx.t_matrix, cx.s_matrix
    size = t_matrix.shape[0]
    if size == 0:
        raise EmptySpaceError("the middle space of the complex is trivial")
    form = t_matrix @ t_matrix.T
    if s_matrix.size:
        form = form + s_matrix.T @ s_matrix
    values, vectors = np.linalg.eigh(0.5 * (form + form.T))
    smallest = float(values[0])
    degenerate = smallest <= 0.0 or 1.0 / np.sqrt(smallest) > DEGENERATE_CONSTANT
    constant = DEGENERATE_CONSTANT if degenerate else 1.0 / np.sqrt(smallest)
    if degenerate:
        logger.warning("estimate on %s degenerates, smallest eigenvalue %.3e", cx.operator_id, smallest)
    return EstimateReport(
        constant=float(constant),
        constant_sum_lower=float(constant / np.sqrt(2.0)),
        constant_sum_upper=float(constant),
        smallest_eigenvalue=smallest,
        minimizer=vectors[:, 0],
        degenerate=bool(degenerate),
        cutoff=cx.cutoff,
        provenance=dict(cx.provenance),
    )


def null_space(matrix: np.ndarray, width: int, rcond: float = SINGULAR_TOLERANCE) -> np.ndarray:
    """Orthonormal basis (width, k) of the kernel of a (rows, width) matrix."""
    if matrix.size == 0:
        return np.eye(width)
    return scipy.linalg.null_space(matrix, rcond=rcond)


def hormander_solve(cx: TruncatedComplex, target: np.ndarray, tolerance: float = 1e-9) -> SolveReport:
    """
    Minimal-norm w with T w = v for v in ker S, and the check ||w|| <= C ||v||.

    :param cx: The complex
    :param target: v as coordinates in H2
    :param tolerance: Relative tolerance of ||S v|| and of the range residual
    :raises PreconditionError: when S v does not vanish
    """
    target = np.asarray(target, dtype=float)
    t_matrix = cx.t_matrix
    size = float(np.linalg.norm(target))
    if size == 0.0:
        return SolveReport("hormander", np.zeros(t_matrix.shape[1]), bounds={"bound_holds": 1.0})

    s_defect = float(np.linalg.norm(cx.s_matrix @ target)) / size if cx.s_matrix.size else 0.0
    if s_defect > tolerance:
        raise PreconditionError(f"S v = {s_defect:.3e} relative, v is not in ker S")

    solution, _, _, _ = np.linalg.lstsq(t_matrix, target, rcond=None)
    residual = float(np.linalg.norm(t_matrix @ solution - target)) / size
    if residual > tolerance:
        logger.warning("v is not in the numerical range of T, residual floor %.3e", residual)

    estimate = best_constant(cx)
    kernel = null_space(t_matrix, t_matrix.shape[1])
    solution_norm = float(np.linalg.norm(solution))
    kernel_component = float(np.linalg.norm(kernel.T @ solution)) / max(solution_norm, 1e-300)
    bound = estimate.constant * size
    return SolveReport(
        name="hormander",
        solution=solution,
        constant=estimate.constant,
        cutoff=cx.cutoff,
        residuals={"range": residual},
        defects={"s_of_v": s_defect, "kernel_component": kernel_component},
        bounds={
            "norm_w": solution_norm,
            "constant_times_norm_v": bound,
            "bound_holds": float(solution_norm <= bound * (1.0 + BOUND_SLACK)),
        },
        provenance=dict(cx.provenance),
    )


def hormander_adjoint_solve(cx: TruncatedComplex, source: np.ndarray, tolerance: float = 1e-9) -> SolveReport:
    """
    Minimal-norm h in ker S with T* h = w for w orthogonal to ker T, and ||h|| <= C ||w||.

    :param source: w as coordinates in H1
    :raises PreconditionError: when w has a component in ker T
    """
    source = np.asarray(source, dtype=float)
    t_matrix = cx.t_matrix
    size = float(np.linalg.norm(source))
    if size == 0.0:
        return SolveReport("hormander_adjoint", np.zeros(t_matrix.shape[0]), bounds={"bound_holds": 1.0})

    kernel_t = null_space(t_matrix, t_matrix.shape[1])
    kernel_defect = float(np.linalg.norm(kernel_t.T @ source)) / size
    if kernel_defect > tolerance:
        raise PreconditionError(f"w has a ker T component {kernel_defect:.3e}")

    kernel_s = null_space(cx.s_matrix, t_matrix.shape[0])
    reduced, _, _, _ = np.linalg.lstsq(t_matrix.T @ kernel_s, source, rcond=None)
    solution = kernel_s @ reduced
    residual = float(np.linalg.norm(t_matrix.T @ solution - source)) / size

    estimate = best_constant(cx)
    solution_norm = float(np.linalg.norm(solution))
    bound = estimate.constant * size
    return SolveReport(
        name="hormander_adjoint",
        solution=solution,
        constant=estimate.constant,
        cutoff=cx.cutoff,
        residuals={"range": residual},
        defects={"kernel_t_component": kernel_defect},
        bounds={
            "norm_h": solution_norm,
            "constant_times_norm_w": bound,
            "bound_holds": float(solution_norm <= bound * (1.0 + BOUND_SLACK)),
        },
        provenance=dict(cx.provenance),
    )


def random_complex(rng: np.random.Generator, dimensions: Sequence[int], rank: int) -> TruncatedComplex:
    """
    An exact random complex with im T = ker S of the given rank.

    :param rng: Source of randomness
    :param dimensions: (dim H1, dim H2, dim H3)
    :param rank: rank of T, at most min(dim H1, dim H2)
    """
    first, middle, last = dimensions
    if rank > min(first, middle) or middle - rank > last:
        raise ConfigurationError(f"rank {rank} does not fit dimensions {tuple(dimensions)}", key="rank")
    orthogonal, _ = np.linalg.qr(rng.standard_normal((middle, middle)))
    t_matrix = orthogonal[:, :rank] @ rng.standard_normal((rank, first))
    s_matrix = rng.standard_normal((last, middle - rank)) @ orthogonal[:, rank:].T
    return TruncatedComplex.from_matrices(t_matrix, s_matrix)


def estimate_trend(assembler: GalerkinAssembler, cutoffs: Sequence[int]) -> EstimateReport:
    """Best constant of (W~, d-_J) at the last cutoff with the trend over all of them."""
    if len(cutoffs) < 1:
        raise ConfigurationError("at least one cutoff is needed", key="cutoffs")
    trend = []
    report = None
    for cutoff in cutoffs:
        report = best_constant(assembler.assemble("w_tilde", cutoff))
        trend.append({"cutoff": cutoff, "constant": report.constant, "degenerate": report.degenerate})
    return EstimateReport(
        constant=report.constant,
        constant_sum_lower=report.constant_sum_lower,
        constant_sum_upper=report.constant_sum_upper,
        smallest_eigenvalue=report.smallest_eigenvalue,
        minimizer=report.minimizer,
        degenerate=report.degenerate,
        cutoff=report.cutoff,
        trend=trend,
        provenance=report.provenance,
    )


def smallest_nonzero_singular_value(cx: TruncatedComplex) -> float | None:
    """None when T has no nonzero singular values."""
    values = cx.t_map.singular_values()
    if values.size == 0 or values[0] <= 0.0:
        return None
    nonzero = values[values > SINGULAR_TOLERANCE * max(1.0, float(values[0]))]
    return float(nonzero.min()) if nonzero.size else None


def spectral_gap_report(
    assembler: GalerkinAssembler, operator_id: str, cutoffs: Sequence[int]
) -> List[Dict[str, Any]]:
    """
    Smallest nonzero singular value per cutoff with a collapse flag against the first cutoff.
    A closed-range diagnostic, not a proof.
    """
    if len(cutoffs) < 2:
        raise ConfigurationError("a spectral gap trend needs at least 2 cutoffs", key="cutoffs")
    rows = []
    first_gap = None
    for cutoff in cutoffs:
        cx = assembler.assemble(operator_id, cutoff)
        gap = smallest_nonzero_singular_value(cx)
        values = cx.t_map.singular_values()
        row = {
            "operator": operator_id,
            "cutoff": cutoff,
            "gap": gap,
            "largest": float(values[0]) if values.size else 0.0,
            "rank": int(np.sum(values > SINGULAR_TOLERANCE * max(1.0, float(values[0])))) if values.size else 0,
            "collapse": False,
            "note": "",
        }
        if gap is None:
            row["note"] = "no nonzero singular values"
        elif first_gap is None:
            first_gap = gap
        elif gap < COLLAPSE_RATIO * first_gap:
            row["collapse"] = True
        rows.append(row)
    logger.info("%s gaps: %s", operator_id, [row["gap"] for row in rows])
    return rows


def closed_range_table(
    assembler: GalerkinAssembler, operator_ids: Sequence[str], cutoffs: Sequence[int]
) -> List[Dict[str, Any]]:
    """spectral_gap_report rows for several operators, flattened into one table."""
    rows = []
    for operator_id in operator_ids:
        rows.extend(spectral_gap_report(assembler, operator_id, cutoffs))
    return rows


def require_bound(report: SolveReport):
    """Raises when a solve report's norm bound failed."""
    if report.bounds.get("bound_holds", 1.0) < 1.0:
        raise NumericalError(f"{report.name}: norm bound violated {report.bounds}")
