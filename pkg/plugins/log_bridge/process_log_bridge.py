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

from __future__ import annotations

import copy
import json
import logging
import re
import threading
from datetime import datetime
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Tuple

from rich.console import Console
from rich.logging import RichHandler
from rich.syntax import Syntax
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

log_cfg = {
    # https://rich.readthedocs.io/en/latest/index.html
    "theme": {
        "logging.time": "bright_cyan",
        "logging.level.error": "bold red",
        "check.pass": "green",
        "check.fail": "bold red",
    },
    "time_style_key": "logging.time",
    "rich": {
        "show_time": True,
        "show_path": False,
    },
    "file": {
        "when": "midnight",
        "backupCount": 10,
        "fmt": "%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d - %(message)s",
    },
}


class ProcessLogBridge:
    """
    Logging bridge of the runner:
    - Rich console with colored timezone-aware timestamps
    - Optional rotating run log file with the same records
    - Drains the pipes of isolated task processes, tees every raw line to a
      per-task log file and re-emits it with an inferred severity
    - Renders JSON fragments: check tables as rich tables, other records as
      highlighted JSON, brace-balanced across lines
    - Syntax-highlights tracebacks
    """

    # ---------- constants ----------
    _LEVEL_WORD = re.compile(r"\b(DEBUG|INFO|WARNING|ERROR|CRITICAL|FATAL)\b")
    _LEVEL_KEYS = ("level", "levelname", "severity")

    _TB_START = "Traceback (most recent call last):"
    _TB_FRAME = re.compile(r'File ".*?", line \d+(?:, in .*)?')
    # a worker traceback ends with "SomeError: message"
    _TB_END = re.compile(r"^\w+(?:\.\w+)*(?:Error|Exception|Interrupt)\b.*$")

    # ---------- construction ----------
    def __init__(
        self, level: str = "INFO", runner_log_file: Optional[str] = None, config: Optional[Dict[str, Any]] = None
    ):
        """
        :param level: Minimum severity shown on the console
        :param runner_log_file: Rotating file receiving every record at DEBUG and above
        :param config: Overrides merged over `log_cfg` (theme, rich and file settings)

        The root logger is reconfigured: its handlers are replaced by the rich
        console handler and the optional file handler.
        """
        self.level_name = level.upper()
        self.runner_log_file = runner_log_file
        cfg = copy.deepcopy(log_cfg)
        if config:
            cfg.update(config)

        theme_styles = {"logging.time": "bright_cyan"}
        theme_styles.update(cfg.get("theme", {}))
        self._time_style_key = cfg.get("time_style_key", "logging.time")
        self.console: Console = Console(theme=Theme(theme_styles))

        rh_kwargs = {
            "console": self.console,
            "rich_tracebacks": True,
            "markup": False,
            "show_time": True,
            "show_path": False,
            "omit_repeated_times": False,
            "log_time_format": self._rich_time_text,
        }
        rh_kwargs.update(cfg.get("rich", {}))
        self.rich_handler: RichHandler = RichHandler(**rh_kwargs)
        self.rich_handler.setLevel(getattr(logging, self.level_name, logging.INFO))
        self.rich_handler.setFormatter(logging.Formatter("%(message)s"))

        self.file_handler: Optional[TimedRotatingFileHandler] = None
        if runner_log_file:
            file_cfg = cfg.get("file", {})
            Path(runner_log_file).parent.mkdir(parents=True, exist_ok=True)
            self.file_handler = TimedRotatingFileHandler(
                runner_log_file,
                when=file_cfg.get("when", "midnight"),
                backupCount=int(file_cfg.get("backupCount", 7)),
                encoding=file_cfg.get("encoding", "utf-8"),
            )
            self.file_handler.setLevel(logging.DEBUG)
            self.file_handler.setFormatter(self._TZFormatter(fmt=file_cfg.get("fmt")))

        root = logging.getLogger()
        root.setLevel(logging.DEBUG)
        root.handlers.clear()
        root.addHandler(self.rich_handler)
        if self.file_handler:
            root.addHandler(self.file_handler)

        self._logger = logging.getLogger(self.__class__.__name__)
        self._logger.debug("runner logging initialized at %s", self.level_name)

        # (process_name, stream_tag) -> state with tee, buffer, balance, collecting, traceback, logger
        self._streams: Dict[Tuple[str, str], Dict[str, Any]] = {}
        self._threads: Dict[str, List[threading.Thread]] = {}

    # ---------- public API ----------
    def attach_process_logger(self, process, process_name: str, log_file: str) -> None:
        """
        Drains stdout and stderr of a running task process in two daemon threads.

        :param process: A subprocess opened with text-mode stdout and stderr pipes
        :param process_name: Label used as the logger name of the re-emitted lines
        :param log_file: File mirroring the raw lines, created when missing
        """
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        threads = []
        for stream_tag, pipe in (("STDOUT", process.stdout), ("STDERR", process.stderr)):
            # pylint: disable=consider-using-with
            tee = open(log_file, "a", encoding="utf-8")
            self._streams[(process_name, stream_tag)] = self._make_stream_state(process_name, tee)
            thread = threading.Thread(target=self._drain_pipe, args=(pipe, process_name, stream_tag), daemon=True)
            thread.start()
            threads.append(thread)
        self._threads[process_name] = threads

    def join_process_logger(self, process_name: str, timeout: Optional[float] = None) -> None:
        """Waits until both pipes of a process are drained."""
        for thread in self._threads.pop(process_name, []):
            thread.join(timeout)

    # ---------- helpers: logging/time ----------
    @classmethod
    def _now_local(cls) -> datetime:
        return datetime.now().astimezone()

    def _rich_time_text(self, record=None, date=None):  # pylint: disable=unused-argument
        """Timestamp Text in the configured time style; the arguments are RichHandler's."""
        now = self._now_local()
        return Text(f"[{now.strftime('%Y-%m-%d %H:%M:%S')} {now.tzname()}]", style=self._time_style_key)

    class _TZFormatter(logging.Formatter):
        """File formatter with timezone-aware timestamps."""

        def formatTime(self, record, datefmt=None):
            dt = datetime.fromtimestamp(record.created).astimezone()
            return f"{dt.strftime('%Y-%m-%d %H:%M:%S')} {dt.tzname()}"

    # ---------- helpers: per-stream state ----------
    @staticmethod
    def _make_stream_state(process_name: str, tee: TextIO) -> Dict[str, Any]:
        return {
            "tee": tee,
            "buffer": [],
            "balance": 0,
            "collecting": False,
            "traceback": [],
            "logger": logging.getLogger(process_name),
        }

    @staticmethod
    def _write_tee(state: Dict[str, Any], raw: str) -> None:
        try:
            state["tee"].write(f"{raw}\n")
        except (OSError, ValueError):
            pass

    @staticmethod
    def _close_stream(state: Dict[str, Any]) -> None:
        try:
            state["tee"].flush()
            state["tee"].close()
        except (OSError, ValueError):
            pass

    # ---------- pipe draining ----------
    def _drain_pipe(self, pipe, process_name: str, stream_tag: str) -> None:
        """Reads lines until EOF, then flushes pending blocks and closes the tee."""
        state = self._streams[(process_name, stream_tag)]
        try:
            for line in iter(pipe.readline, ""):
                self._handle_line(state, line.rstrip("\n"))
        finally:
            try:
                pipe.close()
            except OSError:
                pass
            if state["collecting"]:
                self._emit_collected(state, self._reasm_flush(state))
            if state["traceback"]:
                self._emit_traceback(state)
            self._close_stream(state)

    # ---------- line handling ----------
    def _handle_line(self, state: Dict[str, Any], line: str) -> None:
        """
        Mirrors the raw line, then routes it: traceback collection, single-line
        JSON, multi-line JSON reassembly, or plain text.
        """
        self._write_tee(state, line)
        if line == "":
            return

        if state["traceback"] or line.startswith(self._TB_START):
            state["traceback"].append(line)
            if self._TB_END.match(line):
                self._emit_traceback(state)
            return

        if state["collecting"]:
            self._reasm_add(state, line)
            if state["balance"] <= 0:
                self._emit_collected(state, self._reasm_flush(state))
            return

        record = self._try_parse_json_fragment(line)
        if record is not None:
            self._emit_json_block(state, record)
            return
        if self._reasm_start_if_jsonish(state, line):
            return
        self._emit_text_line(state, line)

    # ---------- reassembler ----------
    @staticmethod
    def _count_braces_outside_quotes(s: str) -> int:
        """Net count of `{` minus `}` outside double-quoted strings."""
        depth = 0
        in_str = False
        esc = False
        for ch in s:
            if esc:
                esc = False
                continue
            if ch == "\\":
                esc = True
                continue
            if ch == '"':
                in_str = not in_str
                continue
            if in_str:
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
        return depth

    def _reasm_start_if_jsonish(self, state: Dict[str, Any], line: str) -> bool:
        """Starts collecting when a line opens more braces than it closes."""
        balance = self._count_braces_outside_quotes(line)
        if "{" in line and balance > 0:
            state["buffer"] = [line]
            state["balance"] = balance
            state["collecting"] = True
            return True
        return False

    def _reasm_add(self, state: Dict[str, Any], line: str) -> None:
        state["buffer"].append(line)
        state["balance"] += self._count_braces_outside_quotes(line)

    @staticmethod
    def _reasm_flush(state: Dict[str, Any]) -> str:
        text = "\n".join(state["buffer"]).strip()
        state["buffer"].clear()
        state["balance"] = 0
        state["collecting"] = False
        return text

    # ---------- severity ----------
    def _infer_level_from_record(self, record: Dict[str, Any]) -> int:
        """
        An explicit level field wins; otherwise an error record is ERROR, a
        report or table that did not pass is WARNING and anything else INFO.
        """
        for key in self._LEVEL_KEYS:
            value = record.get(key)
            if isinstance(value, str) and value.upper() in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
                return getattr(logging, value.upper())
        if record.get("error"):
            return logging.ERROR
        if record.get("passed") is False or record.get("failed"):
            return logging.WARNING
        return logging.INFO

    def _infer_level_from_text(self, line: str, default: int = logging.INFO) -> int:
        """Severity word of a plain line, ERROR for traceback fragments, else the default."""
        match = self._LEVEL_WORD.search(line)
        if not match:
            return logging.ERROR if self._TB_FRAME.search(line) else default
        word = match.group(1)
        return logging.CRITICAL if word == "FATAL" else getattr(logging, word, default)

    # ---------- json helpers ----------
    @staticmethod
    def _try_parse_json_fragment(text: str) -> Optional[Dict[str, Any]]:
        """
        The whole line as a JSON object, else the span between the first `{` and
        the last `}`; None when neither parses.
        """
        if not text:
            return None
        for candidate in (text, text[text.find("{") : text.rfind("}") + 1] if "{" in text else ""):
            if not candidate:
                continue
            try:
                obj = json.loads(candidate)
            except ValueError:
                continue
            return obj if isinstance(obj, dict) else {"message": obj}
        return None

    @staticmethod
    def _is_term_table(record: Dict[str, Any]) -> bool:
        rows = record.get("rows")
        return isinstance(rows, list) and all(isinstance(row, dict) and "name" in row for row in rows)

    def _render_term_table(self, record: Dict[str, Any]) -> Table:
        """A check table as a rich Table: name, value, tolerance, verdict."""
        table = Table(title=str(record.get("title", "checks")), show_lines=False)
        for column in ("term", "value", "tolerance", "pass"):
            table.add_column(column, justify="left" if column == "term" else "right")
        for row in record["rows"]:
            passed = bool(row.get("pass", True))
            tolerance = row.get("tolerance")
            table.add_row(
                str(row["name"]),
                self._format_number(row.get("value")),
                "" if tolerance is None else self._format_number(tolerance),
                Text("pass" if passed else "FAIL", style="check.pass" if passed else "check.fail"),
            )
        return table

    @staticmethod
    def _format_number(value: Any) -> str:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return f"{value:.6g}"
        return str(value)

    # ---------- traceback helpers ----------
    def _emit_traceback(self, state: Dict[str, Any]) -> None:
        text = "\n".join(state["traceback"]).strip()
        state["traceback"] = []
        self._log(state, logging.ERROR, f"{state['logger'].name} (traceback)")
        self.console.print(Syntax(text, "pytb", word_wrap=False))

    # ---------- emitters ----------
    def _emit_json_block(self, state: Dict[str, Any], record: Dict[str, Any]) -> None:
        """Logs a header line, then renders the record as a table or as JSON."""
        level = self._infer_level_from_record(record)
        name = state["logger"].name
        if self._is_term_table(record):
            self._log(state, level, f"{name} - table {record.get('title', '')}")
            self.console.print(self._render_term_table(record))
            return
        body = json.dumps(record, indent=2, ensure_ascii=False, sort_keys=True)
        self._log(state, level, f"{name}\n{body}")

    def _emit_text_line(self, state: Dict[str, Any], line: str) -> None:
        level = self._infer_level_from_text(line, logging.INFO)
        self._log(state, level, f"{state['logger'].name} - {line}")

    def _emit_collected(self, state: Dict[str, Any], block: str) -> None:
        """A reassembled block as JSON when it parses, else as one flattened text line."""
        record = self._try_parse_json_fragment(block)
        if record is not None:
            self._emit_json_block(state, record)
            return
        flat = " ".join(part.strip() for part in block.splitlines() if part.strip())
        self._emit_text_line(state, flat)

    # ---------- logging wrapper ----------
    @staticmethod
    def _log(state: Dict[str, Any], level: int, msg: str) -> None:
        state["logger"].log(level, msg)
