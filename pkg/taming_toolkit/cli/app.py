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
Runs a task and writes its reports:

    <output_dir>/report.json      machine-readable report, canonical JSON
    <output_dir>/report.csv       term tables: term-name, value, tolerance, pass
    <output_dir>/manifold.json    versioned manifold document
    <output_dir>/fields/*.fld     binary sidecars of the produced grid fields

The exit status is 0 when every check passed, 1 on failed checks or a numerical
error, 2 on configuration errors and 3 on I/O errors.
"""

import logging
from pathlib import Path
from typing import Any
from typing import Dict

from taming_toolkit import __version__
from taming_toolkit.cli.tasks import TaskRunner
from taming_toolkit.dataclass.run_config import RunConfig
from taming_toolkit.dataclass.task_outcome import TaskOutcome
from taming_toolkit.errors import ReportIOError
from taming_toolkit.errors import TamingError
from taming_toolkit.io.csv_export import write_csv_report
from taming_toolkit.io.manifold_document import write_manifold_document
from taming_toolkit.io.reports import REPORT_SCHEMA_VERSION
from taming_toolkit.io.reports import write_json_report
from taming_toolkit.io.sidecar import write_field

EXIT_OK = 0
EXIT_FAILED = 1


def build_report(config: RunConfig, outcome: TaskOutcome) -> Dict[str, Any]:
    """The report.json body."""
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "version": __version__,
        "task": config.task,
        "config_hash": config.config_hash,
        "config": config.resolved,
        "passed": outcome.passed,
        "failed": outcome.failed(),
        "tables": [table.to_dict() for table in outcome.tables],
        "sections": outcome.sections,
        "fields": sorted(outcome.fields),
        "timings": outcome.timings,
    }


def error_report(config: RunConfig, error: TamingError) -> Dict[str, Any]:
    """The report.json body of an aborted task."""
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "version": __version__,
        "task": config.task,
        "config_hash": config.config_hash,
        "config": config.resolved,
        "passed": False,
        "error": {"type": error.__class__.__name__, "message": str(error), "exit_code": error.exit_code},
    }


class TamingApp:
    """
    Glue between a resolved RunConfig, the TaskRunner and the report writers.
    """

    def __init__(self, config: RunConfig):
        """
        :param config: The resolved run configuration
        """
        self.config = config
        self.output_dir = Path(config.output_dir)
        self._logger = logging.getLogger(self.__class__.__name__)

    def write_outcome(self, outcome: TaskOutcome, runner: TaskRunner):
        """Writes every report file of a finished task."""
        write_json_report(self.output_dir / "report.json", build_report(self.config, outcome))
        write_csv_report(self.output_dir / "report.csv", outcome.tables)
        write_manifold_document(self.output_dir / "manifold.json", runner.spec)
        metadata = {"config_hash": self.config.config_hash, "manifold": self.config.manifold_id}
        for name, values in outcome.fields.items():
            write_field(self.output_dir / "fields" / f"{name}.fld", values, dict(metadata, name=name))

    def execute(self) -> int:
        """
        :return: The process exit status
        """
        runner = TaskRunner(self.config)
        try:
            outcome = runner.run()
            self.write_outcome(outcome, runner)
        except ReportIOError as error:
            self._logger.error("%s", error)
            return error.exit_code
        except TamingError as error:
            self._logger.error("%s aborted: %s", self.config.task, error)
            try:
                write_json_report(self.output_dir / "report.json", error_report(self.config, error))
            except ReportIOError as io_error:
                self._logger.error("%s", io_error)
                return io_error.exit_code
            return error.exit_code

        if outcome.passed:
            self._logger.info("%s passed, reports in %s", self.config.task, self.output_dir)
            return EXIT_OK
        for name in outcome.failed():
            self._logger.warning("failed check: %s", name)
        return EXIT_FAILED


def run(config: RunConfig) -> int:
    """Runs the configured task and writes its reports."""
    return TamingApp(config).execute()
