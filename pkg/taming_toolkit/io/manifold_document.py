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
import logging
from pathlib import Path
from typing import Any
from typing import Dict

from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.errors import ReportIOError
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.io.reports import canonical_json_bytes

SCHEMA_VERSION = 1
KIND = "taming_toolkit.manifold"

logger = logging.getLogger(__name__)


def manifold_document(spec: ManifoldSpec) -> Dict[str, Any]:
    """Versioned description from which the manifold can be rebuilt."""
    document = {"kind": KIND, "schema_version": SCHEMA_VERSION}
    document.update(spec.to_dict())
    return document


def write_manifold_document(path: Path, spec: ManifoldSpec) -> Path:
    """
    :raises ReportIOError: when the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(canonical_json_bytes(manifold_document(spec)))
    except OSError as exception:
        raise ReportIOError(f"cannot write {path}: {exception}") from exception
    return path


def spec_from_document(document: Dict[str, Any]) -> ManifoldSpec:
    """
    Rebuilds a spec through the catalog from a document.

    :raises ConfigurationError: on a foreign kind, an unknown schema version or missing fields
    """
    if document.get("kind") != KIND:
        raise ConfigurationError(f"not a manifold document: kind {document.get('kind')!r}", key="kind")
    if document.get("schema_version") != SCHEMA_VERSION:
        raise ConfigurationError(
            f"schema version {document.get('schema_version')!r} is not {SCHEMA_VERSION}", key="schema_version"
        )
    try:
        grid = document["grid"]
        grid_spec = GridSpec(
            resolution=tuple(int(count) for count in grid["resolution"]),
            periods=tuple(float(period) for period in grid["periods"]),
            active=tuple(bool(flag) for flag in grid["active"]),
        )
        name = document["name"]
    except (KeyError, TypeError) as exception:
        raise ConfigurationError(f"incomplete manifold document: {exception}", key="grid") from exception
    params = {key: float(value) for key, value in (document.get("params") or {}).items()}
    logger.debug("rebuilding %s from document", name)
    return build_manifold(name, grid_spec, params)


def read_manifold_document(path: Path) -> ManifoldSpec:
    """
    :raises ReportIOError: when the file cannot be read or parsed
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exception:
        raise ReportIOError(f"cannot read {path}: {exception}") from exception
    return spec_from_document(document)
