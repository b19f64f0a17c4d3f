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

import tempfile
from pathlib import Path
from unittest import TestCase

from taming_toolkit.dataclass.term_table import TermRow
from taming_toolkit.dataclass.term_table import TermTable
from taming_toolkit.errors import ReportIOError
from taming_toolkit.io.csv_export import CSV_COLUMNS
from taming_toolkit.io.csv_export import read_csv_report
from taming_toolkit.io.csv_export import write_csv_report


class TestCsvExport(TestCase):
    """
    Unit tests for the term-table CSV.
    """

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_rows(self):
        """One line per row, names prefixed with the table title."""
        identities = TermTable("identities")
        identities.add(TermRow.check("d_squared", 1e-14, 1e-10))
        identities.add(TermRow.check("adjoint", 1e-3, 1e-10))
        lejmi = TermTable("lejmi")
        lejmi.add(TermRow.info("constant_kernel_dimension", 2))
        path = write_csv_report(self.root / "report.csv", [identities, lejmi])

        self.assertEqual(",".join(CSV_COLUMNS), path.read_text(encoding="utf-8").splitlines()[0])
        rows = read_csv_report(path)
        self.assertEqual(
            ["identities.d_squared", "identities.adjoint", "lejmi.constant_kernel_dimension"],
            [row["term-name"] for row in rows],
        )
        self.assertEqual(["true", "false", "true"], [row["pass"] for row in rows])
        self.assertEqual(1e-14, float(rows[0]["value"]))
        self.assertEqual("", rows[2]["tolerance"])

    def test_missing_file(self):
        """Reading a missing CSV is an I/O error."""
        with self.assertRaises(ReportIOError):
            read_csv_report(self.root / "missing.csv")
