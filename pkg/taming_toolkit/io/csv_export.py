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

import csv
import logging
from pathlib import Path
from typing import Iterable

from taming_toolkit.dataclass.term_table import TermTable
from taming_toolkit.errors import ReportIOError

CSV_COLUMNS = ("term-name", "value", "tolerance", "pass")

logger = logging.getLogger(__name__)


def _format(value: float | None) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_csv_report(path: Path, tables: Iterable[TermTable]) -> Path:
    """
    Writes the rows of every table, names prefixed with the table title.

    :raises ReportIOError: when the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for table in tables:
                for row in table.rows:
                    name = f"{table.title}.{row.name}"
                    writer.writerow([name, _format(row.value), _format(row.tolerance), str(row.passed).lower()])
    except OSError as exception:
        raise ReportIOError(f"cannot write {path}: {exception}") from exception
    logger.info("wrote %s", path)
    return path


def read_csv_report(path: Path) -> list[dict[str, str]]:
    """Rows of a written report as dictionaries keyed by the column names."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))
    except OSError as exception:
        raise ReportIOError(f"cannot read {path}: {exception}") from exception
