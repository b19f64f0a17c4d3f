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

from taming_toolkit.errors import ConfigurationError

PRECONDITIONERS = ("none", "inverse_laplacian")


@dataclass(frozen=True)
class EllipticSolveConfig:
    """
    Settings of the sigma solves.

    rtol is the relative residual target of CG; right-hand sides below noise_floor
    times their reference size are treated as zero. With strict set, a kernel
    orthogonality defect above kernel_tolerance raises instead of being reported.
    """

    rtol: float = 1e-10
    max_iterations: int = 4000
    deflate_kernel: bool = True
    preconditioner: str = "none"
    noise_floor: float = 1e-12
    kernel_tolerance: float = 1e-8
    strict: bool = False

    def __post_init__(self):
        if not 0.0 < self.rtol <= 1e-4:
            raise ConfigurationError(f"rtol {self.rtol} outside (0, 1e-4]", key="solver.rtol")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be positive", key="solver.max_iterations")
        if self.preconditioner not in PRECONDITIONERS:
            raise ConfigurationError(
                f"unknown preconditioner '{self.preconditioner}', expected one of {PRECONDITIONERS}",
                key="solver.preconditioner",
            )
