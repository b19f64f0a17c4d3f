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
Loads run configurations.

A run configuration is a HOCON tree merged over DEFAULTS and overridden by command
line flags. Every key is checked against DEFAULTS, so a misspelt key fails with a
ConfigurationError naming it instead of being ignored.
"""

import logging
import os
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Iterator
from typing import Mapping
from typing import Tuple

from pyhocon import ConfigFactory
from pyhocon import ConfigTree
from pyhocon.exceptions import ConfigException

from taming_toolkit import __version__
from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.grid_spec import GridSpec
from taming_toolkit.dataclass.run_config import TASKS
from taming_toolkit.dataclass.run_config import LocalSettings
from taming_toolkit.dataclass.run_config import RunConfig
from taming_toolkit.dataclass.run_config import Tolerances
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.geometry.catalog import CATALOG
from taming_toolkit.geometry.catalog import KODAIRA_THURSTON
from taming_toolkit.io.reports import sha256_of

OUTPUT_ROOT_ENV = "TAMING_OUTPUT_ROOT"
DEFAULT_OUTPUT_ROOT = "runs"
SEED_LIMIT = 2**64

DEFAULTS = """
task = verify
manifold {
  id = flat_torus_kahler
  params {}
}
grid {
  resolution = 8
  periods = [1.0, 1.0, 1.0, 1.0]
  active = null
}
cutoff = 2
cutoffs = [1, 2]
tolerances {
  relative = 1e-8
  solver = 1e-6
  identity = 1e-8
  estimate = 1e-6
}
solver {
  rtol = 1e-10
  max_iterations = 4000
  preconditioner = none
  deflate_kernel = true
}
seed = 0
samples = 3
output_dir = null
threads = null
field {
  expression = null
  file = null
}
local {
  extents = null
  nodes = 16
  weight = default
  weight_scale = 0.05
  u_recipe = bump
}
at = [0.0, 0.0, 0.0, 0.0]
widen = null
strict = false
"""

# subtrees whose keys are free-form
OPEN_TREES = ("manifold.params", "field.expression")
# keys that do not change any computed number and stay out of the hash
UNHASHED = ("output_dir", "threads")
LOCAL_WEIGHTS = ("default", "zero")


def _dotted_keys(tree: ConfigTree, prefix: str = "") -> Iterator[str]:
    for key, value in tree.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, ConfigTree) and dotted not in OPEN_TREES:
            yield from _dotted_keys(value, dotted + ".")
        else:
            yield dotted


def _plain(value: Any) -> Any:
    if isinstance(value, ConfigTree):
        return {key: _plain(value.get(key)) for key in value.keys()}
    if isinstance(value, list):
        return [_plain(item) for item in value]
    return value


class ConfigLoader:
    """
    Turns HOCON text, files and flag overrides into a validated RunConfig.
    """

    def __init__(self, output_root: str | None = None):
        """
        :param output_root: Root of the default output directories, read from
            TAMING_OUTPUT_ROOT when omitted
        """
        self.output_root = Path(output_root or os.getenv(OUTPUT_ROOT_ENV, DEFAULT_OUTPUT_ROOT))
        self._defaults = ConfigFactory.parse_string(DEFAULTS)
        self._known = set(_dotted_keys(self._defaults))
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # sources

    def parse_string(self, text: str) -> ConfigTree:
        """:raises ConfigurationError: on HOCON syntax errors"""
        try:
            return ConfigFactory.parse_string(text)
        except (ConfigException, ValueError) as exception:
            raise ConfigurationError(f"cannot parse config: {exception}", key="config") from exception

    def parse_file(self, path: str | Path) -> ConfigTree:
        """:raises ConfigurationError: on a missing file or HOCON syntax errors"""
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"no config file at {path}", key="config")
        try:
            return ConfigFactory.parse_file(str(path))
        except (ConfigException, ValueError) as exception:
            raise ConfigurationError(f"cannot parse {path}: {exception}", key="config") from exception

    @staticmethod
    def overrides(values: Mapping[str, Any]) -> ConfigTree:
        """A tree from dotted keys; None values are skipped."""
        tree = ConfigTree()
        for key, value in values.items():
            if value is not None:
                tree.put(key, value)
        return tree

    # ------------------------------------------------------------------
    # resolution

    def load(
        self, source: ConfigTree | str | Path | None = None, overrides: Mapping[str, Any] | None = None
    ) -> RunConfig:
        """
        :param source: A parsed tree, a path to a HOCON file, or None for the defaults
        :param overrides: Dotted keys from the command line, applied last
        :raises ConfigurationError: naming the first offending key
        """
        if source is None:
            tree = ConfigTree()
        elif isinstance(source, ConfigTree):
            tree = source
        else:
            tree = self.parse_file(source)
        if overrides:
            tree = self.overrides(overrides).with_fallback(tree)
        self._check_keys(tree)
        merged = tree.with_fallback(self._defaults)
        return self.resolve(merged)

    def _check_keys(self, tree: ConfigTree):
        for dotted in _dotted_keys(tree):
            if dotted not in self._known and not any(dotted.startswith(f"{prefix}.") for prefix in OPEN_TREES):
                raise ConfigurationError("unknown key", key=dotted)

    # pylint: disable=too-many-locals
    def resolve(self, merged: ConfigTree) -> RunConfig:
        """Validates a merged tree and builds the RunConfig."""
        task = self._string(merged, "task")
        if task not in TASKS:
            raise ConfigurationError(f"unknown task '{task}', expected one of {TASKS}", key="task")
        manifold_id = self._string(merged, "manifold.id")
        if manifold_id not in CATALOG:
            raise ConfigurationError(f"unknown manifold '{manifold_id}', expected one of {CATALOG}", key="manifold.id")
        params = self._params(merged)
        grid = self._grid(merged, manifold_id)

        cutoff = self._integer(merged, "cutoff", minimum=0)
        cutoffs = tuple(self._integer_list(merged, "cutoffs", minimum=0))
        names = ("relative", "solver", "identity", "estimate")
        tolerances = Tolerances(**{name: self._positive(merged, f"tolerances.{name}") for name in names})
        strict = self._boolean(merged, "strict")
        solver = EllipticSolveConfig(
            rtol=self._positive(merged, "solver.rtol"),
            max_iterations=self._integer(merged, "solver.max_iterations", minimum=1),
            deflate_kernel=self._boolean(merged, "solver.deflate_kernel"),
            preconditioner=self._string(merged, "solver.preconditioner"),
            strict=strict,
        )
        seed = self._integer(merged, "seed", minimum=0)
        if seed >= SEED_LIMIT:
            raise ConfigurationError("seed must fit in 64 bits", key="seed")
        samples = self._integer(merged, "samples", minimum=1)
        threads = merged.get("threads", None)
        if threads is not None:
            threads = self._integer(merged, "threads", minimum=1)

        expression = merged.get("field.expression", None)
        if isinstance(expression, ConfigTree):
            expression = {str(key): str(value) for key, value in _plain(expression).items()}
        elif expression is not None and not isinstance(expression, str):
            raise ConfigurationError("expected a string or a map of coordinate to string", key="field.expression")
        field_file = merged.get("field.file", None)
        if field_file is not None:
            field_file = Path(self._string(merged, "field.file"))

        local = self._local(merged)
        at = tuple(self._float_list(merged, "at", length=4))
        widen = merged.get("widen", None)
        if widen is not None:
            widen = self._string(merged, "widen")

        resolved = {key: value for key, value in _plain(merged).items() if key not in UNHASHED}
        resolved["version"] = __version__
        config_hash = sha256_of(resolved)

        output_dir = merged.get("output_dir", None)
        if output_dir is None:
            output_dir = self.output_root / f"{task}-{manifold_id}-{config_hash[:12]}"
        elif not isinstance(output_dir, str):
            raise ConfigurationError("expected a path string", key="output_dir")

        config = RunConfig(
            task=task,
            manifold_id=manifold_id,
            manifold_params=params,
            grid=grid,
            cutoff=cutoff,
            cutoffs=cutoffs,
            tolerances=tolerances,
            solver=solver,
            seed=seed,
            output_dir=Path(output_dir),
            threads=threads,
            samples=samples,
            field_expression=expression,
            field_file=field_file,
            local=local,
            at=at,
            widen=widen,
            strict=strict,
            resolved=resolved,
            config_hash=config_hash,
        )
        self._logger.debug("resolved %s on %s, hash %s", task, manifold_id, config_hash)
        return config

    # ------------------------------------------------------------------
    # sections

    def _params(self, merged: ConfigTree) -> Dict[str, float]:
        params = merged.get("manifold.params", None)
        if params is None:
            return {}
        if not isinstance(params, ConfigTree):
            raise ConfigurationError("expected a map of numbers", key="manifold.params")
        result = {}
        for key, value in _plain(params).items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigurationError(f"expected a number, got {value!r}", key=f"manifold.params.{key}")
            result[str(key)] = float(value)
        return result

    def _grid(self, merged: ConfigTree, manifold_id: str) -> GridSpec:
        active = merged.get("grid.active", None)
        if active is None:
            active = (True, True, True, manifold_id != KODAIRA_THURSTON)
        elif not isinstance(active, list) or len(active) != 4 or not all(isinstance(flag, bool) for flag in active):
            raise ConfigurationError("expected 4 booleans", key="grid.active")
        active = tuple(active)

        resolution = merged.get("grid.resolution")
        if isinstance(resolution, bool):
            raise ConfigurationError("expected an integer or 4 integers", key="grid.resolution")
        if isinstance(resolution, int):
            counts = tuple(resolution if flag else 1 for flag in active)
        else:
            counts = tuple(self._integer_list(merged, "grid.resolution", minimum=1, length=4))
        periods = tuple(self._float_list(merged, "grid.periods", length=4))
        return GridSpec(resolution=counts, periods=periods, active=active)

    def _local(self, merged: ConfigTree) -> LocalSettings:
        extents = merged.get("local.extents", None)
        if extents is not None:
            if not isinstance(extents, list):
                raise ConfigurationError("expected a list of [lo, hi] pairs", key="local.extents")
            pairs = []
            for pair in extents:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ConfigurationError("expected a list of [lo, hi] pairs", key="local.extents")
                if any(isinstance(end, bool) or not isinstance(end, (int, float)) for end in pair):
                    raise ConfigurationError("box ends must be numbers", key="local.extents")
                pairs.append((float(pair[0]), float(pair[1])))
            extents = tuple(pairs)
        weight = self._string(merged, "local.weight")
        if weight not in LOCAL_WEIGHTS:
            raise ConfigurationError(f"unknown weight '{weight}', expected one of {LOCAL_WEIGHTS}", key="local.weight")
        return LocalSettings(
            extents=extents,
            nodes=self._integer(merged, "local.nodes", minimum=1),
            weight=weight,
            weight_scale=self._positive(merged, "local.weight_scale"),
            u_recipe=self._string(merged, "local.u_recipe"),
        )

    # ------------------------------------------------------------------
    # typed getters

    @staticmethod
    def _string(merged: ConfigTree, key: str) -> str:
        value = merged.get(key, None)
        if not isinstance(value, str):
            raise ConfigurationError(f"expected a string, got {value!r}", key=key)
        return value

    @staticmethod
    def _boolean(merged: ConfigTree, key: str) -> bool:
        value = merged.get(key, None)
        if not isinstance(value, bool):
            raise ConfigurationError(f"expected true or false, got {value!r}", key=key)
        return value

    @staticmethod
    def _integer(merged: ConfigTree, key: str, minimum: int | None = None) -> int:
        value = merged.get(key, None)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"expected an integer, got {value!r}", key=key)
        if minimum is not None and value < minimum:
            raise ConfigurationError(f"{value} is below {minimum}", key=key)
        return value

    @staticmethod
    def _positive(merged: ConfigTree, key: str) -> float:
        value = merged.get(key, None)
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            raise ConfigurationError(f"expected a positive number, got {value!r}", key=key)
        return float(value)

    @staticmethod
    def _integer_list(
        merged: ConfigTree, key: str, minimum: int | None = None, length: int | None = None
    ) -> Tuple[int, ...]:
        values = merged.get(key, None)
        if not isinstance(values, list) or (length is not None and len(values) != length):
            raise ConfigurationError(f"expected a list of {length or 'some'} integers", key=key)
        for value in values:
            if isinstance(value, bool) or not isinstance(value, int) or (minimum is not None and value < minimum):
                raise ConfigurationError(f"bad entry {value!r}", key=key)
        return tuple(values)

    @staticmethod
    def _float_list(merged: ConfigTree, key: str, length: int) -> Tuple[float, ...]:
        values = merged.get(key, None)
        if not isinstance(values, list) or len(values) != length:
            raise ConfigurationError(f"expected a list of {length} numbers", key=key)
        if any(isinstance(value, bool) or not isinstance(value, (int, float)) for value in values):
            raise ConfigurationError("entries must be numbers", key=key)
        return tuple(float(value) for value in values)


def load_config(
    source: ConfigTree | str | Path | None = None,
    overrides: Mapping[str, Any] | None = None,
    output_root: str | None = None,
) -> RunConfig:
    """Module level convenience wrapper around ConfigLoader.load."""
    return ConfigLoader(output_root).load(source, overrides)
