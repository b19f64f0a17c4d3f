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

import struct
import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
from parameterized import parameterized

from taming_toolkit.errors import ReportIOError
from taming_toolkit.io.sidecar import LENGTH_FORMAT
from taming_toolkit.io.sidecar import MAGIC
from taming_toolkit.io.sidecar import read_field
from taming_toolkit.io.sidecar import write_field


class TestSidecar(TestCase):
    """
    Unit tests for the binary field files.
    """

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    @parameterized.expand(
        [
            ("real", np.linspace(0.0, 1.0, 24).reshape(2, 3, 4)),
            ("complex", (np.arange(6) + 1j * np.arange(6)[::-1]).reshape(3, 2)),
        ]
    )
    def test_values_and_metadata(self, _name: str, values: np.ndarray):
        """
        :param _name: Case label
        :param values: Field to store
        """
        path = write_field(self.root / "fields" / "f.fld", values, {"name": "f", "scale": np.float64(2.0)})
        read, metadata = read_field(path)
        np.testing.assert_array_equal(values, read)
        self.assertEqual(values.dtype.kind, read.dtype.kind)
        self.assertEqual({"name": "f", "scale": 2.0}, metadata)

    def _raw(self, name: str, header: bytes, payload: bytes) -> Path:
        path = self.root / name
        path.write_bytes(MAGIC + struct.pack(LENGTH_FORMAT, len(header)) + header + payload)
        return path

    def test_wrong_magic(self):
        """Files without the magic prefix are rejected."""
        path = self.root / "other.fld"
        path.write_bytes(b"NOTAFIELD" + b"\x00" * 16)
        with self.assertRaises(ReportIOError):
            read_field(path)

    def test_malformed_header(self):
        """A header that is not JSON is rejected."""
        with self.assertRaises(ReportIOError):
            read_field(self._raw("header.fld", b"{shape", b""))

    def test_unsupported_dtype(self):
        """Only little-endian float64 and complex128 are stored."""
        with self.assertRaises(ReportIOError):
            read_field(self._raw("dtype.fld", b'{"dtype": "<i4", "shape": [2]}', b"\x00" * 8))

    def test_short_payload(self):
        """A truncated payload is rejected."""
        with self.assertRaises(ReportIOError):
            read_field(self._raw("short.fld", b'{"dtype": "<f8", "shape": [4]}', b"\x00" * 16))

    def test_missing_file(self):
        """A missing file is an I/O error."""
        with self.assertRaises(ReportIOError):
            read_field(self.root / "missing.fld")
