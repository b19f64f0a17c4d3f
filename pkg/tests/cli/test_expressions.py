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

from taming_toolkit.cli.expressions import one_form_field
from taming_toolkit.cli.expressions import parse_expression
from taming_toolkit.cli.expressions import scalar_field
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.geometry.catalog import build_manifold


class TestExpressions(TestCase):
    """
    Unit tests for the trigonometric field expressions.
    """

    @classmethod
    def setUpClass(cls):
        cls.spec = build_manifold(KODAIRA_THURSTON, GridSpec.uniform(8, active=(True, True, True, False)))

    def test_terms(self):
        """Signs, coefficients, frequencies and products."""
        terms = parse_expression("-0.5*sin(2*t) + cos(x)*sin(-1*y) + 3")
        self.assertEqual(3, len(terms))
        self.assertEqual(-0.5, terms[0].coefficient)
        self.assertEqual((("sin", 2, 0),), terms[0].factors)
        self.assertEqual((("cos", 1, 1), ("sin", -1, 2)), terms[1].factors)
        self.assertEqual(3.0, terms[2].coefficient)
        self.assertEqual((), terms[2].factors)

    def test_values(self):
        """Frequencies count periods of the coordinate."""
        t = self.spec.grid.coordinate(0)
        x = self.spec.grid.coordinate(1)
        expected = 2.0 * np.sin(2.0 * np.pi * t) * np.cos(4.0 * np.pi * x) + 1.0
        np.testing.assert_allclose(scalar_field("2*sin(t)*cos(2*x) + 1", self.spec), expected, atol=1e-14)

    def test_constant_factor_on_inactive_axis(self):
        """A zero frequency along z is allowed."""
        np.testing.assert_allclose(scalar_field("cos(0*z)", self.spec), 1.0)

    def test_inactive_coordinate(self):
        """Fields on the nilmanifold cannot vary along z."""
        with self.assertRaises(ConfigurationError):
            scalar_field("sin(z)", self.spec)

    @parameterized.expand(
        [
            ("dangling_sign", "sin(t) + ", 9),
            ("trailing_text", "sin(t) $", 8),
            ("bad_factor", "2*exp(t)", 2),
            ("empty", "   ", 1),
        ]
    )
    def test_parse_errors(self, _name: str, text: str, column: int):
        """
        Parse errors name the column of the first problem.

        :param _name: Case label
        :param text: Malformed expression
        :param column: 1-based column of the error
        """
        with self.assertRaises(ConfigurationError) as context:
            parse_expression(text)
        self.assertIn(f"column {column} ", str(context.exception))
        self.assertEqual("field.expression", context.exception.key)

    def test_one_form(self):
        """Missing coordinates are zero, keys are checked."""
        form = one_form_field({"t": "sin(x)"}, self.spec)
        self.assertEqual(1, form.degree)
        np.testing.assert_allclose(form.components[1:], 0.0)
        with self.assertRaises(ConfigurationError):
            one_form_field({"w": "sin(x)"}, self.spec)
