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
Binary field files.

Layout: the 8-byte magic, an unsigned little-endian 64-bit header length, a UTF-8
JSON header {"dtype", "shape", "metadata"} and the raw little-endian payload in C
order.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Tuple

import numpy as np

from taming_toolkit.errors import ReportIOError
from taming_toolkit.io.reports import to_jsonable

MAGIC = b"TAMEFLD1"
LENGTH_FORMAT = "<Q"
SUPPORTED_DTYPES = ("<f8", "<c16")

logger = logging.getLogger(__name__)


def _little_endian(values: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(values):
        return np.ascontiguousarray(values, dtype="<c16")
    return np.ascontiguousarray(values, dtype="<f8")


def write_field(path: Path, values: np.ndarray, metadata: Dict[str, Any] | None = None) -> Path:
    """
    :param path: Target file
    :param values: Real or complex array of any shape
    :param metadata: JSON friendly description stored in the header
    :raises ReportIOError: when the file cannot be written
    """
    path = Path(path)
    payload = _little_endian(np.asarray(values))
    header = json.dumps(
        {"dtype": payload.dtype.str, "shape": list(payload.shape), "metadata": to_jsonable(metadata or {})},
        sort_keys=True,
    ).encode("utf-8")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("wb") as handle:
            handle.write(MAGIC)
            handle.write(struct.pack(LENGTH_FORMAT, len(header)))
            handle.write(header)
            handle.write(payload.tobytes(order="C"))
    except OSError as exception:
        raise ReportIOError(f"cannot write {path}: {exception}") from exception
    logger.debug("wrote field %s with shape %s", path, payload.shape)
    return path


def read_field(path: Path) -> Tuple[np.ndarray, Dict[str, Any]]:
    """
    :return: (values, metadata)
    :raises ReportIOError: on a missing file, a wrong magic, a malformed header or a short payload
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exception:
        raise ReportIOError(f"cannot read {path}: {exception}") from exception

    prefix = len(MAGIC) + struct.calcsize(LENGTH_FORMAT)
    if len(raw) < prefix or raw[: len(MAGIC)] != MAGIC:
        raise ReportIOError(f"{path} is not a field file")
    (length,) = struct.unpack(LENGTH_FORMAT, raw[len(MAGIC) : prefix])
    try:
        header = json.loads(raw[prefix : prefix + length].decode("utf-8"))
        dtype = np.dtype(header["dtype"])
        shape = tuple(int(size) for size in header["shape"])
    except (ValueError, KeyError, TypeError) as exception:
        raise ReportIOError(f"{path} has a malformed header: {exception}") from exception
    if dtype.str not in SUPPORTED_DTYPES:
        raise ReportIOError(f"{path} stores unsupported dtype {dtype.str}")

    payload = raw[prefix + length :]
    expected = int(np.prod(shape)) * dtype.itemsize
    if len(payload) != expected:
        raise ReportIOError(f"{path} payload holds {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload, dtype=dtype).reshape(shape)
    return values.astype(dtype.newbyteorder("=")), header.get("metadata", {})
