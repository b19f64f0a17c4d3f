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

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.errors import DegreeError


class TestFormField(TestCase):
    """
    Unit tests for p-form component storage and arithmetic.
    """

    def test_component_count_is_checked(self):
        """A 2-form needs 6 components."""
        with self.assertRaises(DegreeError):
            FormField(2, np.zeros((4, 4, 4)))

    def test_mixed_degrees_do_not_add(self):
        """Adding a 1-form to a 2-form is an error."""
        with self.assertRaises(DegreeError):
            _ = FormField.zeros(1, (4,)) + FormField.zeros(2, (4,))

    def test_scalar_field_multiplication(self):
        """Multiplying by a scalar field scales every component pointwise."""
        form = FormField.constant(1, [1.0, 2.0, 0.0, -1.0], (3,))
        scaled = form * np.array([0.0, 1.0, 2.0])
        np.testing.assert_array_equal([0.0, 2.0, 4.0], scaled.components[1])
        np.testing.assert_array_equal(scaled.components, (np.array([0.0, 1.0, 2.0]) * form).components)

    def test_real_and_imaginary_parts(self):
        """Complex components split into real and imaginary forms."""
        form = FormField.constant(0, [1.0 + 2.0j], (2,))
        self.assertFalse(form.is_real)
        self.assertTrue(form.real.is_real)
        np.testing.assert_array_equal([[2.0, 2.0]], form.imag.components)
        np.testing.assert_array_equal([[1.0 - 2.0j, 1.0 - 2.0j]], form.conj().components)
        self.assertAlmostEqual(np.sqrt(5.0), form.max_abs())
