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
Deterministic JSON reports.

Reports are written as canonical JSON (sorted keys, fixed separators, trailing
newline) so that two runs of the same configuration produce identical bytes apart
from the timings block.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from taming_toolkit.errors import ReportIOError

REPORT_SCHEMA_VERSION = "1.0"
TIMINGS_KEY = "timings"

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """
    Converts numpy scalars and arrays, tuples and non-finite floats into plain JSON
    values. Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"real": to_jsonable(float(value.real)), "imag": to_jsonable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    if isinstance(value, Path):
        return str(value)
    return value


def canonical_json_bytes(obj: Any) -> bytes:
    """Sorted, indented JSON with a trailing newline."""
    text = json.dumps(to_jsonable(obj), sort_keys=True, ensure_ascii=True, indent=2, separators=(", ", ": "))
    return (text + "\n").encode("utf-8")


def sha256_of(obj: Any) -> str:
    """Hex SHA-256 of the canonical JSON of obj."""
    return hashlib.sha256(canonical_json_bytes(obj)).hexdigest()


def without_timings(report: Any) -> Any:
    """A copy of the report with every timings block removed, at any depth."""
    if isinstance(report, dict):
        return {key: without_timings(item) for key, item in report.items() if key != TIMINGS_KEY}
    if isinstance(report, list):
        return [without_timings(item) for item in report]
    return report


def write_json_report(path: Path, report: Any) -> Path:
    """
    :param path: Target file; parent directories are created
    :param report: JSON friendly report body
    :return: The written path
    :raises ReportIOError: when the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(canonical_json_bytes(report))
    except OSError as exception:
        raise ReportIOError(f"cannot write {path}: {exception}") from exception
    logger.info("wrote %s", path)
    return path


def read_json_report(path: Path) -> Any:
    """Reads a report back as plain JSON values."""
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exception:
        raise ReportIOError(f"cannot read {path}: {exception}") from exception
