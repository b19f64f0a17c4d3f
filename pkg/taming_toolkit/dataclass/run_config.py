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
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Mapping
from typing import Tuple

from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.grid_spec import GridSpec

TASKS = ("verify", "spectrum", "solve-w", "theorem1", "local", "coefficients")


@dataclass(frozen=True)
class Tolerances:
    """
    relative bounds identity-style residuals of the operators, solver the solution
    residuals of the global pipelines, identity the discrete identities of the form
    calculus and estimate the quadrature-limited local checks.
    """

    relative: float = 1e-8
    solver: float = 1e-6
    identity: float = 1e-8
    estimate: float = 1e-6


@dataclass(frozen=True)
class LocalSettings:
    """Box, nodes, weight and test field of the local task."""

    extents: Tuple[Tuple[float, float], ...] | None = None
    nodes: int = 16
    weight: str = "default"
    weight_scale: float = 0.05
    u_recipe: str = "bump"


@dataclass(frozen=True)
class RunConfig:
    """
    A resolved run configuration. resolved keeps the plain key tree the hash is
    computed from.
    """

    task: str
    manifold_id: str
    manifold_params: Mapping[str, float]
    grid: GridSpec
    cutoff: int
    cutoffs: Tuple[int, ...]
    tolerances: Tolerances
    solver: EllipticSolveConfig
    seed: int
    output_dir: Path
    threads: int | None = None
    samples: int = 3
    field_expression: str | Mapping[str, str] | None = None
    field_file: Path | None = None
    local: LocalSettings = field(default_factory=LocalSettings)
    at: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    widen: str | None = None
    strict: bool = False
    resolved: Dict[str, Any] = field(default_factory=dict, compare=False)
    config_hash: str = ""
