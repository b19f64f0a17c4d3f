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
Exception hierarchy shared by every module of the toolkit.

Each exception carries the process exit code the runner reports for it:
2 for configuration problems, 1 for numerical failures and 3 for I/O.
"""


class TamingError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class ConfigurationError(TamingError):
    """A run configuration, expression or catalog parameter is malformed."""

    exit_code = 2

    def __init__(self, message: str, key: str | None = None):
        """
        :param message: Human readable description of the problem
        :param key: Dotted config key that triggered the error, if known
        """
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class NumericalError(TamingError):
    """Base class for numerical failures."""


class TamingViolationError(NumericalError):
    """omega(v, Jv) > 0 fails somewhere on the grid."""


class ClosednessError(NumericalError):
    """The taming form is not closed to tolerance."""


class FrameDegeneracyError(NumericalError):
    """A pointwise frame or metric matrix is singular."""


class DegreeError(NumericalError):
    """A form operation was asked for an impossible degree."""


class SolverDivergenceError(NumericalError):
    """An iterative solver stopped before reaching its tolerance."""


class OrthogonalityDefectError(NumericalError):
    """A right-hand side is not orthogonal to the discrete kernel."""


class PreconditionError(NumericalError):
    """An operator was applied outside the domain where its formula holds."""


class BudgetExceededError(NumericalError):
    """Dense assembly would exceed the configured storage budget."""


class ResolutionError(NumericalError):
    """Quadrature or grid resolution is too coarse for the requested check."""


class EmptySpaceError(NumericalError):
    """An estimate was requested on a trivial space."""


class ReportIOError(TamingError):
    """Reports or field files could not be written or read."""

    exit_code = 3
