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

from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import List

import numpy as np

from taming_toolkit.dataclass.term_table import TermTable


@dataclass
class TaskOutcome:
    """
    What a task hands to the report writer: checked tables, free-form report
    sections, grid fields for the binary sidecars and wall-clock timings.
    """

    task: str
    tables: List[TermTable] = field(default_factory=list)
    sections: Dict[str, Any] = field(default_factory=dict)
    fields: Dict[str, np.ndarray] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True when every table passed."""
        return all(table.passed for table in self.tables)

    def failed(self) -> List[str]:
        """Dotted names of the failed rows."""
        return [f"{table.title}.{name}" for table in self.tables for name in table.failed()]
