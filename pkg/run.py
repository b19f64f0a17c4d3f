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

import argparse
import json
import logging
import logging.config
import os
import signal
import subprocess
import sys
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List

import scipy.fft
from dotenv import load_dotenv

from plugins.log_bridge.process_log_bridge import ProcessLogBridge
from taming_toolkit.cli.app import TamingApp
from taming_toolkit.cli.config import OUTPUT_ROOT_ENV
from taming_toolkit.cli.config import ConfigLoader
from taming_toolkit.dataclass.run_config import TASKS
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import ReportIOError
from taming_toolkit.io.reports import read_json_report

ISOLATED_ENV = "TAMING_ISOLATED"


class TamingRunner:
    """Command-line tool running one task of the taming toolkit."""

    # pylint: disable=too-many-instance-attributes
    def __init__(self, argv: List[str] | None = None):
        """
        :param argv: Command line arguments without the program name, sys.argv[1:] when omitted
        """
        self.is_windows = os.name == "nt"
        self.root_dir = os.path.dirname(os.path.abspath(__file__))
        self.argv = list(sys.argv[1:] if argv is None else argv)
        self.isolated = os.getenv(ISOLATED_ENV, "false").lower() == "true"

        self.load_env_variables()

        # Default Configuration
        self.args: Dict[str, Any] = {
            "output_root": os.getenv(OUTPUT_ROOT_ENV, os.path.join(self.root_dir, "runs")),
            "log_level": os.getenv("TAMING_LOG_LEVEL", "info"),
            "threads": os.getenv("TAMING_THREADS"),
            "logbridge_enabled": os.getenv("TAMING_LOGBRIDGE_ENABLED", "true").lower() == "true",
            "logs_dir": os.path.join(self.root_dir, "logs"),
            "log_json": os.getenv("TAMING_LOG_JSON"),
        }
        self.args.update(self.parse_args())

        self.log_bridge = None
        if self.isolated:
            # plain level-word lines for the parent's bridge
            logging.basicConfig(
                level=self.args["log_level"].upper(),
                format="%(levelname)s %(name)s: %(message)s",
                stream=sys.stderr,
                force=True,
            )
        elif self.args["logbridge_enabled"]:
            os.makedirs(self.args["logs_dir"], exist_ok=True)
            self.log_bridge = ProcessLogBridge(
                level=self.args["log_level"],
                runner_log_file=os.path.join(self.args["logs_dir"], "runner.log"),
            )
        elif self.args["log_json"]:
            self.load_logging_config(self.args["log_json"])
        else:
            logging.basicConfig(level=self.args["log_level"].upper(), format="%(asctime)s %(levelname)s %(message)s")
        self._logger = logging.getLogger(self.__class__.__name__)

        self.process = None

    def load_env_variables(self):
        """Load .env file from project root and set variables."""
        env_path = os.path.join(self.root_dir, ".env")
        if os.path.exists(env_path):
            load_dotenv(env_path)

    @staticmethod
    def load_logging_config(path: str):
        """Applies a logging dictConfig stored as JSON, e.g. logging.json."""
        try:
            with open(path, "r", encoding="utf-8") as handle:
                logging.config.dictConfig(json.load(handle))
        except (OSError, ValueError) as exception:
            logging.basicConfig(level=logging.INFO)
            logging.getLogger(__name__).warning("cannot apply logging config %s: %s", path, exception)

    def parse_args(self) -> Dict[str, Any]:
        """Parses command-line arguments for configuration."""
        parser = argparse.ArgumentParser(
            description="Run one task of the taming toolkit and write its reports.",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        parser.add_argument("task", choices=TASKS, help="Task to run")
        parser.add_argument("--config", type=str, default=None, help="HOCON run configuration")
        parser.add_argument("--manifold", type=str, default=None, help="Catalog id of the manifold")
        parser.add_argument(
            "--param", action="append", default=[], metavar="KEY=VALUE", help="Manifold parameter, repeatable"
        )
        parser.add_argument("--grid", type=int, nargs="+", default=None, help="Resolution, 1 or 4 integers")
        parser.add_argument("--cutoff", type=int, default=None, help="Galerkin cutoff")
        parser.add_argument("--cutoffs", type=int, nargs="+", default=None, help="Cutoff sweep of the spectrum task")
        parser.add_argument("--seed", type=int, default=None, help="Seed of every random input")
        parser.add_argument("--samples", type=int, default=None, help="Random samples per identity check")
        parser.add_argument("--output-dir", type=str, default=None, help="Report directory")
        parser.add_argument("--threads", type=int, default=self.args["threads"], help="FFT worker threads")
        parser.add_argument("--expression", type=str, default=None, help="Scalar field expression")
        parser.add_argument("--field-file", type=str, default=None, help="Field sidecar used as input")
        parser.add_argument("--widen", type=str, default=None, help="Degeneracy widening of the theorem1 task")
        parser.add_argument("--strict", action="store_true", default=None, help="Fail on unconverged solves")
        parser.add_argument("--nodes", type=int, default=None, help="Nodes per axis of the local box")
        parser.add_argument("--u-recipe", type=str, default=None, help="Test field of the local task")
        parser.add_argument("--at", type=float, nargs=4, default=None, help="Point of the coefficients task")
        parser.add_argument("--output-root", type=str, default=self.args["output_root"], help="Default report root")
        parser.add_argument("--log-level", type=str, default=self.args["log_level"], help="Console log level")
        parser.add_argument("--isolate", action="store_true", help="Run the task in a child process")
        parser.add_argument(
            "--no-logbridge", action="store_false", dest="logbridge_enabled", default=self.args["logbridge_enabled"]
        )
        args, _ = parser.parse_known_args(self.argv)
        return vars(args)

    def overrides(self) -> Dict[str, Any]:
        """Dotted config keys set on the command line."""
        grid = self.args["grid"]
        overrides = {
            "task": self.args["task"],
            "manifold.id": self.args["manifold"],
            "grid.resolution": grid[0] if grid and len(grid) == 1 else grid,
            "cutoff": self.args["cutoff"],
            "cutoffs": self.args["cutoffs"],
            "seed": self.args["seed"],
            "samples": self.args["samples"],
            "output_dir": self.args["output_dir"],
            "threads": None if self.args["threads"] is None else int(self.args["threads"]),
            "field.expression": self.args["expression"],
            "field.file": self.args["field_file"],
            "widen": self.args["widen"],
            "strict": self.args["strict"],
            "local.nodes": self.args["nodes"],
            "local.u_recipe": self.args["u_recipe"],
            "at": self.args["at"],
        }
        for pair in self.args["param"]:
            key, sep, value = pair.partition("=")
            if not sep or not key:
                raise ConfigurationError(f"expected KEY=VALUE, got '{pair}'", key="manifold.params")
            try:
                overrides[f"manifold.params.{key.strip()}"] = float(value)
            except ValueError as exception:
                raise ConfigurationError(f"not a number: '{value}'", key=f"manifold.params.{key}") from exception
        return overrides

    def run_task(self) -> int:
        """Resolves the configuration and runs the task in this process."""
        try:
            config = ConfigLoader(self.args["output_root"]).load(self.args["config"], self.overrides())
        except ConfigurationError as error:
            self._logger.error("%s", error)
            return error.exit_code
        workers = config.threads or 1
        self._logger.info("running %s on %s into %s", config.task, config.manifold_id, config.output_dir)
        with scipy.fft.set_workers(workers):
            status = TamingApp(config).execute()
        if self.isolated:
            self.print_summary(config.output_dir, config.task, status)
        return status

    @staticmethod
    def print_summary(output_dir: Path, task: str, status: int):
        """One JSON line per check table, then a summary line, on stdout."""
        try:
            report = read_json_report(Path(output_dir) / "report.json")
        except ReportIOError:
            report = {}
        for table in report.get("tables", []):
            print(json.dumps(table, sort_keys=True), flush=True)
        summary = {
            "task": task,
            "exit_code": status,
            "passed": report.get("passed", False),
            "failed": report.get("failed", []),
            "output_dir": str(output_dir),
        }
        if "error" in report:
            summary["error"] = report["error"]
        print(json.dumps(summary, sort_keys=True), flush=True)

    def start_process(self, command: List[str], process_name: str, log_file: str) -> subprocess.Popen:
        """Start a subprocess and route its output through the log bridge."""
        creation_flags = subprocess.CREATE_NEW_PROCESS_GROUP if self.is_windows else 0
        env = dict(os.environ, **{ISOLATED_ENV: "true"})

        # pylint: disable=consider-using-with
        process = subprocess.Popen(
            command,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            bufsize=1,
            env=env,
            start_new_session=not self.is_windows,
            creationflags=creation_flags,
        )
        self._logger.info("started %s with PID %d", process_name, process.pid)
        if self.log_bridge:
            self.log_bridge.attach_process_logger(process, process_name, log_file)
        return process

    def run_isolated(self) -> int:
        """Re-invokes this script for the task in a child process and waits for it."""
        argv = [arg for arg in self.argv if arg != "--isolate"]
        command = [sys.executable, os.path.abspath(__file__)] + argv
        log_file = os.path.join(self.args["logs_dir"], f"{self.args['task']}.log")
        if not self.log_bridge:
            # without the bridge the child's output goes straight to this terminal
            self.process = subprocess.Popen(command, env=dict(os.environ, **{ISOLATED_ENV: "true"}))
            return self.process.wait()
        self.process = self.start_process(command, self.args["task"], log_file)
        status = self.process.wait()
        self.log_bridge.join_process_logger(self.args["task"])
        self._logger.info("%s exited with status %d", self.args["task"], status)
        return status

    def signal_handler(self, signum, frame):  # pylint: disable=unused-argument
        """Handle termination signals to cleanly exit."""
        self._logger.warning("received signal %d, shutting down", signum)
        if self.process is not None and self.process.poll() is None:
            if self.is_windows:
                self.process.terminate()
            else:
                try:
                    os.killpg(os.getpgid(self.process.pid), signal.SIGKILL)
                except (ProcessLookupError, PermissionError):
                    pass
        sys.exit(128 + signum)

    def run(self) -> int:
        """Run the task, in process or isolated."""
        signal.signal(signal.SIGINT, self.signal_handler)
        signal.signal(signal.SIGTERM, self.signal_handler)
        if self.is_windows:
            signal.signal(signal.SIGBREAK, self.signal_handler)  # pylint: disable=no-member

        if self.args["isolate"] and not self.isolated:
            return self.run_isolated()
        return self.run_task()


if __name__ == "__main__":
    runner = TamingRunner()
    sys.exit(runner.run())
