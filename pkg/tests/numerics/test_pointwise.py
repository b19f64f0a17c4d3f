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

from unittest import TestCase

import numpy as np
from parameterized import parameterized

from taming_toolkit.errors import FrameDegeneracyError
from taming_toolkit.numerics import pointwise

SHAPE = (3, 2)


def _field(seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((4, 4, *SHAPE))


class TestPointwise(TestCase):
    """
    Unit tests for the batched linear algebra on matrix fields.
    """

    def test_batch_axes_round_trip(self):
        """Grid axes move to the front and back without mixing entries."""
        matrix = _field(0)
        batch = pointwise.to_batch(matrix)
        self.assertEqual((*SHAPE, 4, 4), batch.shape)
        self.assertEqual(matrix[1, 2, 2, 0], batch[2, 0, 1, 2])
        np.testing.assert_array_equal(matrix, pointwise.from_batch(batch))

    def test_matmul_matches_numpy(self):
        """matmul and apply agree with numpy at one grid point."""
        left, right = _field(1), _field(2)
        vector = np.random.default_rng(3).standard_normal((4, *SHAPE))
        np.testing.assert_allclose(left[..., 1, 0] @ right[..., 1, 0], pointwise.matmul(left, right)[..., 1, 0])
        np.testing.assert_allclose(left[..., 2, 1] @ vector[:, 2, 1], pointwise.apply(left, vector)[:, 2, 1])
        transposed = pointwise.apply_transpose(left, vector)
        np.testing.assert_allclose(left[..., 0, 1].T @ vector[:, 0, 1], transposed[:, 0, 1])

    def test_inverse(self):
        """inverse is a pointwise inverse."""
        matrix = _field(4) + 4.0 * pointwise.constant_field(np.eye(4), SHAPE)
        product = pointwise.matmul(matrix, pointwise.inverse(matrix))
        np.testing.assert_allclose(pointwise.constant_field(np.eye(4), SHAPE), product, atol=1e-12)

    def test_inverse_of_singular_field(self):
        """A singular matrix at a single grid point is reported."""
        matrix = pointwise.constant_field(np.eye(4), SHAPE)
        matrix[:, :, 2, 1] = np.ones((4, 4))
        with self.assertRaises(FrameDegeneracyError):
            pointwise.inverse(matrix, what="frame")

    @parameterized.expand([(1,), (2,), (3,)])
    def test_compound_is_multiplicative(self, degree: int):
        """
        Cauchy-Binet: the compound of a product is the product of the compounds.

        :param degree: Compound degree
        """
        left, right = _field(5), _field(6)
        expected = pointwise.matmul(pointwise.compound(left, degree), pointwise.compound(right, degree))
        np.testing.assert_allclose(expected, pointwise.compound(pointwise.matmul(left, right), degree), atol=1e-10)

    def test_compound_extremes(self):
        """Degree 0 is 1, degree 1 is the matrix and degree 4 is the determinant."""
        matrix = _field(7)
        np.testing.assert_array_equal(np.ones(SHAPE), pointwise.compound(matrix, 0)[0, 0])
        np.testing.assert_allclose(matrix, pointwise.compound(matrix, 1))
        np.testing.assert_allclose(pointwise.determinant(matrix), pointwise.compound(matrix, 4)[0, 0])

    def test_two_form_matrix(self):
        """The matrix of a 2-form is antisymmetric and maps back to the components."""
        components = np.random.default_rng(8).standard_normal((6, *SHAPE))
        matrix = pointwise.two_form_to_matrix(components)
        np.testing.assert_array_equal(-matrix, pointwise.transpose(matrix))
        self.assertEqual(components[pointwise.pair_position(1, 3)][0, 0], matrix[1, 3, 0, 0])
        np.testing.assert_allclose(components, pointwise.matrix_to_two_form(matrix))

    def test_min_eigenvalue(self):
        """The smallest eigenvalue of a diagonal field is its smallest diagonal entry."""
        matrix = pointwise.constant_field(np.diag([3.0, 0.5, 2.0, 1.0]), SHAPE)
        matrix[1, 1, 0, 0] = -2.0
        smallest = pointwise.min_eigenvalue(pointwise.symmetric_part(matrix))
        self.assertAlmostEqual(-2.0, smallest[0, 0])
        self.assertAlmostEqual(0.5, smallest[1, 1])
