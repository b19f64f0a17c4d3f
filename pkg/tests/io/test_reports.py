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

import json
import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
from parameterized import parameterized

from taming_toolkit.errors import ReportIOError
from taming_toolkit.io.reports import canonical_json_bytes
from taming_toolkit.io.reports import read_json_report
from taming_toolkit.io.reports import sha256_of
from taming_toolkit.io.reports import to_jsonable
from taming_toolkit.io.reports import without_timings
from taming_toolkit.io.reports import write_json_report


class TestReports(TestCase):
    """
    Unit tests for canonical JSON, hashing and report files.
    """

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    @parameterized.expand(
        [
            ("numpy_float", np.float64(0.5), 0.5),
            ("numpy_int", np.int32(7), 7),
            ("numpy_bool", np.bool_(True), True),
            ("array", np.arange(3), [0, 1, 2]),
            ("tuple", (1, 2.5), [1, 2.5]),
            ("infinity", float("inf"), "inf"),
            ("minus_infinity", -np.inf, "-inf"),
            ("nan", float("nan"), "nan"),
            ("complex", 1.0 + 2.0j, {"real": 1.0, "imag": 2.0}),
            ("path", Path("runs") / "a", str(Path("runs") / "a")),
            ("nested", {1: [np.float32(0.25)]}, {"1": [0.25]}),
        ]
    )
    def test_to_jsonable(self, _name: str, value, expected):
        """
        :param _name: Case label
        :param value: Input value
        :param expected: Plain JSON value
        """
        self.assertEqual(expected, to_jsonable(value))

    def test_canonical_bytes_ignore_key_order(self):
        """Key order does not change the bytes or the hash."""
        first = {"b": 1, "a": {"y": 2.0, "x": [1, 2]}}
        second = {"a": {"x": [1, 2], "y": 2.0}, "b": 1}
        self.assertEqual(canonical_json_bytes(first), canonical_json_bytes(second))
        self.assertEqual(sha256_of(first), sha256_of(second))
        self.assertNotEqual(sha256_of(first), sha256_of({"b": 2}))
        self.assertTrue(canonical_json_bytes(first).endswith(b"\n"))

    def test_without_timings(self):
        """timings blocks are dropped at any depth."""
        report = {"timings": {"total": 1.0}, "sections": [{"timings": {}, "value": 3}], "value": 1}
        self.assertEqual({"sections": [{"value": 3}], "value": 1}, without_timings(report))

    def test_write_and_read(self):
        """A written report reads back as plain JSON."""
        path = write_json_report(self.root / "nested" / "report.json", {"passed": True, "value": np.float64(1.5)})
        self.assertEqual({"passed": True, "value": 1.5}, read_json_report(path))
        self.assertEqual({"passed": True, "value": 1.5}, json.loads(path.read_text(encoding="utf-8")))

    def test_unwritable_target(self):
        """A directory in place of the file is an I/O error."""
        (self.root / "report.json").mkdir()
        with self.assertRaises(ReportIOError) as context:
            write_json_report(self.root / "report.json", {})
        self.assertEqual(3, context.exception.exit_code)

    def test_missing_report(self):
        """Reading a missing report is an I/O error."""
        with self.assertRaises(ReportIOError):
            read_json_report(self.root / "missing.json")
