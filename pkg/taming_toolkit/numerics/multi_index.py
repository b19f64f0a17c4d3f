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
Combinatorics of the exterior algebra on a 4-dimensional coframe.

Components of a p-form are stored along the first axis, one entry per strictly
increasing multi-index in lexicographic order.
"""

from functools import lru_cache
from itertools import combinations
from typing import Dict
from typing import Sequence
from typing import Tuple

import numpy as np

from taming_toolkit.errors import DegreeError

DIMENSION = 4

COORDINATE_NAMES = ("t", "x", "y", "z")


@lru_cache(maxsize=None)
def multi_indices(degree: int) -> Tuple[Tuple[int, ...], ...]:
    """
    :param degree: Form degree between 0 and 4
    :return: All strictly increasing multi-indices of that length
    """
    if degree < 0 or degree > DIMENSION:
        raise DegreeError(f"degree {degree} outside 0..{DIMENSION}")
    return tuple(combinations(range(DIMENSION), degree))


@lru_cache(maxsize=None)
def _positions(degree: int) -> Dict[Tuple[int, ...], int]:
    return {index: position for position, index in enumerate(multi_indices(degree))}


def component_count(degree: int) -> int:
    """:return: C(4, degree)"""
    return len(multi_indices(degree))


def position_of(index: Sequence[int]) -> int:
    """
    :param index: Strictly increasing multi-index
    :return: Its position along the component axis
    """
    key = tuple(index)
    return _positions(len(key))[key]


def permutation_sign(sequence: Sequence[int]) -> int:
    """
    :param sequence: Indices, possibly repeated
    :return: 0 on repeats, otherwise the sign of the sorting permutation
    """
    items = list(sequence)
    if len(set(items)) != len(items):
        return 0
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def wedge_tensor(p: int, q: int) -> np.ndarray:
    """
    Sign tensor of the wedge product on basis forms.

    eps^I ^ eps^J = T[I, J, K] eps^K

    :param p: Degree of the left factor
    :param q: Degree of the right factor
    :return: Array of shape (C(4,p), C(4,q), C(4,p+q))
    """
    if p + q > DIMENSION:
        raise DegreeError(f"wedge of degrees {p} and {q} exceeds {DIMENSION}")
    tensor = np.zeros((component_count(p), component_count(q), component_count(p + q)))
    for i, left in enumerate(multi_indices(p)):
        for j, right in enumerate(multi_indices(q)):
            sign = permutation_sign(left + right)
            if sign:
                tensor[i, j, position_of(sorted(left + right))] = sign
    tensor.setflags(write=False)
    return tensor


@lru_cache(maxsize=None)
def complement_pairing(p: int) -> np.ndarray:
    """
    eps^I ^ eps^K = W[I, K] eps^{0123} for |I| = p, |K| = 4 - p.

    W is a signed permutation matrix, so its inverse is its transpose.
    """
    return wedge_tensor(p, DIMENSION - p)[:, :, 0]


def constant_wedge(left: np.ndarray, right: np.ndarray, p: int, q: int) -> np.ndarray:
    """Wedge of two constant forms given as component vectors."""
    return np.einsum("ijk,i,j->k", wedge_tensor(p, q), left, right)


def basis_vector(degree: int, index: Sequence[int]) -> np.ndarray:
    """Component vector of the basis form eps^index."""
    vector = np.zeros(component_count(degree))
    vector[position_of(index)] = 1.0
    return vector


def exterior_structure_matrices(structure: np.ndarray) -> Tuple[np.ndarray, ...]:
    """
    Algebraic part of d in an invariant coframe.

    With d eps^a = sum_{b<c} structure[a, (b,c)] eps^b ^ eps^c, the Leibniz rule gives
    d(eps^I) = sum_K C_p[I, K] eps^K for every degree p.

    :param structure: Array of shape (4, 6)
    :return: Tuple (C_0, ..., C_3), C_p of shape (C(4,p), C(4,p+1))
    """
    matrices = []
    for degree in range(DIMENSION):
        matrix = np.zeros((component_count(degree), component_count(degree + 1)))
        for row, index in enumerate(multi_indices(degree)):
            for slot, letter in enumerate(index):
                head = index[:slot]
                tail = index[slot + 1:]
                term = constant_wedge(basis_vector(len(head), head), structure[letter], len(head), 2)
                term = constant_wedge(term, basis_vector(len(tail), tail), len(head) + 2, len(tail))
                matrix[row] += (-1) ** slot * term
        matrix.setflags(write=False)
        matrices.append(matrix)
    return tuple(matrices)


def label(index: Sequence[int]) -> str:
    """Readable name of a multi-index, e.g. (0, 1) -> 'tx'."""
    return "".join(COORDINATE_NAMES[i] for i in index) or "1"
