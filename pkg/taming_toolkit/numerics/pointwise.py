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
Pointwise linear algebra on matrix fields.

A matrix field has shape (m, n, *grid_shape); helpers move the grid axes to the front,
call the batched numpy / scipy routine and move them back.
"""

from typing import Sequence

import numpy as np

from taming_toolkit.errors import FrameDegeneracyError
from taming_toolkit.numerics.multi_index import component_count
from taming_toolkit.numerics.multi_index import multi_indices
from taming_toolkit.numerics.multi_index import position_of

CONDITION_LIMIT = 1e12


def to_batch(matrix: np.ndarray) -> np.ndarray:
    """(m, n, *shape) -> (*shape, m, n)"""
    return np.moveaxis(np.moveaxis(matrix, 0, -1), 0, -1)


def from_batch(batch: np.ndarray) -> np.ndarray:
    """(*shape, m, n) -> (m, n, *shape)"""
    return np.moveaxis(np.moveaxis(batch, -1, 0), -1, 0)


def apply(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """Pointwise matrix-vector product: (m, n, *s) x (n, *s) -> (m, *s)."""
    return np.einsum("ij...,j...->i...", matrix, vector)


def apply_transpose(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """Pointwise transpose product: (m, n, *s) x (m, *s) -> (n, *s)."""
    return np.einsum("ij...,i...->j...", matrix, vector)


def matmul(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Pointwise matrix product of two matrix fields."""
    return np.einsum("ij...,jk...->ik...", left, right)


def transpose(matrix: np.ndarray) -> np.ndarray:
    """Pointwise transpose."""
    return np.swapaxes(matrix, 0, 1)


def inverse(matrix: np.ndarray, what: str = "matrix") -> np.ndarray:
    """
    Pointwise inverse of a square matrix field.

    :param matrix: Array (n, n, *shape)
    :param what: Name used in the error message
    :return: The inverse field
    """
    batch = to_batch(matrix)
    condition = np.linalg.cond(batch.reshape(-1, *batch.shape[-2:]))
    worst = float(np.max(condition)) if condition.size else 0.0
    if not np.isfinite(worst) or worst > CONDITION_LIMIT:
        raise FrameDegeneracyError(f"{what} is singular at some grid point (condition {worst:.3e})")
    return from_batch(np.linalg.inv(batch))


def determinant(matrix: np.ndarray) -> np.ndarray:
    """Pointwise determinant."""
    return np.linalg.det(to_batch(matrix))


def compound(matrix: np.ndarray, degree: int) -> np.ndarray:
    """
    The degree-th compound matrix: minors over strictly increasing row and column
    multi-indices. compound(A, p) represents A acting on p-vectors.

    :param matrix: Array (4, 4, *shape), real or complex
    :param degree: 0..4
    :return: Array (C(4,p), C(4,p), *shape)
    """
    rest = matrix.shape[2:]
    count = component_count(degree)
    result = np.zeros((count, count, *rest), dtype=matrix.dtype)
    if degree == 0:
        result[0, 0] = 1.0
        return result
    batch = to_batch(matrix)
    for row, rows in enumerate(multi_indices(degree)):
        for col, cols in enumerate(multi_indices(degree)):
            minor = batch[..., list(rows), :][..., list(cols)]
            result[row, col] = np.linalg.det(minor)
    return result


def two_form_to_matrix(components: np.ndarray) -> np.ndarray:
    """2-form components (6, *s) -> antisymmetric (4, 4, *s) with M[a, b] = beta(E_a, E_b)."""
    rest = components.shape[1:]
    matrix = np.zeros((4, 4, *rest), dtype=components.dtype)
    for position, (a, b) in enumerate(multi_indices(2)):
        matrix[a, b] = components[position]
        matrix[b, a] = -components[position]
    return matrix


def matrix_to_two_form(matrix: np.ndarray) -> np.ndarray:
    """Inverse of two_form_to_matrix (antisymmetric part)."""
    rest = matrix.shape[2:]
    components = np.zeros((6, *rest), dtype=matrix.dtype)
    for position, (a, b) in enumerate(multi_indices(2)):
        components[position] = 0.5 * (matrix[a, b] - matrix[b, a])
    return components


def symmetric_part(matrix: np.ndarray) -> np.ndarray:
    """Pointwise (M + M^T) / 2."""
    return 0.5 * (matrix + transpose(matrix))


def min_eigenvalue(symmetric: np.ndarray) -> np.ndarray:
    """Pointwise smallest eigenvalue of a symmetric (or hermitian) matrix field."""
    return np.linalg.eigvalsh(to_batch(symmetric))[..., 0]


def constant_field(matrix: np.ndarray, shape: Sequence[int]) -> np.ndarray:
    """Broadcasts a constant matrix to a (writable) matrix field."""
    view = matrix.reshape(matrix.shape + (1,) * len(shape))
    return np.array(np.broadcast_to(view, matrix.shape + tuple(shape)))


def pair_position(first: int, second: int) -> int:
    """Position of the 2-index (first, second), first < second."""
    return position_of((first, second))
