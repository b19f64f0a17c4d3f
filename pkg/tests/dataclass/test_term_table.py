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

from parameterized import parameterized

from taming_toolkit.dataclass.task_outcome import TaskOutcome
from taming_toolkit.dataclass.term_table import TermRow
from taming_toolkit.dataclass.term_table import TermTable


class TestTermTable(TestCase):
    """
    Unit tests for check rows, tables and task outcomes.
    """

    @parameterized.expand(
        [
            ("inside", 1e-9, 1e-8, True),
            ("boundary", 1e-8, 1e-8, True),
            ("negative_inside", -1e-9, 1e-8, True),
            ("outside", 2e-8, 1e-8, False),
        ]
    )
    def test_check(self, _name: str, value: float, tolerance: float, expected: bool):
        """
        :param value: Checked residual
        :param tolerance: Bound on its absolute value
        :param expected: Verdict
        """
        self.assertEqual(expected, TermRow.check("r", value, tolerance).passed)

    def test_at_least(self):
        """Slacks pass when non-negative up to the tolerance."""
        self.assertTrue(TermRow.at_least("slack", 5.0, 0.0).passed)
        self.assertTrue(TermRow.at_least("slack", -1e-12, 1e-10).passed)
        self.assertFalse(TermRow.at_least("slack", -1e-3, 1e-10).passed)

    def test_table_and_outcome(self):
        """Failures carry the table title in the outcome."""
        table = TermTable("identities")
        table.add(TermRow.check("d_squared", 0.0, 1e-8))
        table.add(TermRow.check("adjoint", 1.0, 1e-8))
        table.add(TermRow.info("note", 3.0))
        self.assertFalse(table.passed)
        self.assertEqual(["adjoint"], table.failed())
        self.assertEqual(3.0, table.value("note"))
        with self.assertRaises(KeyError):
            table.value("missing")

        merged = TermTable("all")
        merged.extend(table)
        self.assertEqual("identities.d_squared", merged.rows[0].name)

        outcome = TaskOutcome("verify", tables=[table, TermTable("empty")])
        self.assertFalse(outcome.passed)
        self.assertEqual(["identities.adjoint"], outcome.failed())

        view = table.to_dict()
        self.assertEqual("identities", view["title"])
        self.assertIsNone(view["rows"][2]["tolerance"])
        self.assertFalse(view["rows"][1]["pass"])
