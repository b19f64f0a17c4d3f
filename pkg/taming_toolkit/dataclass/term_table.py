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
Tabulated checks: one row per named quantity with its tolerance and verdict.
"""

from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import List


@dataclass(frozen=True)
class TermRow:
    """
    One checked or reported quantity. Rows without a tolerance are informational
    and always pass.
    """

    name: str
    value: float
    tolerance: float | None = None
    passed: bool = True

    @classmethod
    def check(cls, name: str, value: float, tolerance: float) -> "TermRow":
        """A row that passes when |value| <= tolerance."""
        return cls(name, float(value), float(tolerance), bool(abs(value) <= tolerance))

    @classmethod
    def at_least(cls, name: str, value: float, tolerance: float) -> "TermRow":
        """A row that passes when value >= -tolerance, used for inequality slacks."""
        return cls(name, float(value), float(tolerance), bool(value >= -tolerance))

    @classmethod
    def info(cls, name: str, value: float) -> "TermRow":
        """A reported value without a verdict."""
        return cls(name, float(value))


@dataclass
class TermTable:
    """
    Ordered rows plus a free-form summary for the JSON report.
    """

    title: str
    rows: List[TermRow] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def add(self, row: TermRow) -> TermRow:
        """Appends a row and returns it."""
        self.rows.append(row)
        return row

    def extend(self, other: "TermTable"):
        """Appends the rows of another table, prefixing their names with its title."""
        for row in other.rows:
            self.rows.append(TermRow(f"{other.title}.{row.name}", row.value, row.tolerance, row.passed))

    @property
    def passed(self) -> bool:
        """True when every row passed."""
        return all(row.passed for row in self.rows)

    def failed(self) -> List[str]:
        """Names of the failed rows."""
        return [row.name for row in self.rows if not row.passed]

    def value(self, name: str) -> float:
        """Value of the named row."""
        for row in self.rows:
            if row.name == name:
                return row.value
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        """JSON friendly view."""
        return {
            "title": self.title,
            "passed": self.passed,
            "failed": self.failed(),
            "rows": [
                {"name": row.name, "value": row.value, "tolerance": row.tolerance, "pass": row.passed}
                for row in self.rows
            ],
            "summary": dict(self.summary),
        }
