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
Field expressions of run configurations.

An expression is a signed sum of terms; a term is an optional coefficient times a
product of factors sin(k*c) or cos(k*c), with k an integer and c one of t, x, y, z.
The argument is measured in periods of c, so cos(2*x) is cos(2 pi 2 x / L_x) and
every expression is a band-limited periodic field:

    "0.5*cos(x)*sin(2*y) - 1.5e-1*sin(-1*t) + 2"

A 1-form is given as a map from coordinate name to such an expression, the
coefficient of dt, dx, dy or dz.
"""

import re
from dataclasses import dataclass
from typing import List
from typing import Mapping
from typing import Tuple

import numpy as np

from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.numerics.multi_index import COORDINATE_NAMES

EXPRESSION_KEY = "field.expression"

_SPACE = re.compile(r"\s*")
_SIGN = re.compile(r"\s*([+-])")
_NUMBER = re.compile(r"\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)")
_FACTOR = re.compile(r"\s*(sin|cos)\(\s*(?:([+-]?\s*\d+)\s*\*\s*)?([txyz])\s*\)")
_TIMES = re.compile(r"\s*\*")


@dataclass(frozen=True)
class Term:
    """coefficient * product of (kind, frequency, coordinate) factors"""

    coefficient: float
    factors: Tuple[Tuple[str, int, int], ...]


class ExpressionParser:
    """Cursor based parser of the expression grammar."""

    def __init__(self, text: str, key: str = EXPRESSION_KEY):
        self.text = text
        self.key = key
        self.position = 0

    def _fail(self, what: str):
        raise ConfigurationError(f"{what} at column {self.position + 1} of '{self.text}'", key=self.key)

    def _match(self, pattern: re.Pattern) -> re.Match | None:
        found = pattern.match(self.text, self.position)
        if found:
            self.position = found.end()
        return found

    def _factor(self) -> Tuple[str, int, int] | None:
        found = self._match(_FACTOR)
        if found is None:
            return None
        frequency = int(found.group(2).replace(" ", "")) if found.group(2) else 1
        return found.group(1), frequency, COORDINATE_NAMES.index(found.group(3))

    def _term(self, sign: float) -> Term:
        coefficient = sign
        factors = []
        number = self._match(_NUMBER)
        if number:
            coefficient *= float(number.group(1))
        else:
            factor = self._factor()
            if factor is None:
                self._fail("expected a number, sin( or cos(")
            factors.append(factor)
        while True:
            mark = self.position
            if not self._match(_TIMES):
                break
            factor = self._factor()
            if factor is None:
                self.position = mark
                self._fail("expected sin( or cos( after '*'")
            factors.append(factor)
        return Term(coefficient, tuple(factors))

    def parse(self) -> List[Term]:
        """:raises ConfigurationError: naming the column of the first error"""
        if not self.text.strip():
            self._fail("empty expression")
        terms = []
        leading = self._match(_SIGN)
        terms.append(self._term(-1.0 if leading and leading.group(1) == "-" else 1.0))
        while True:
            sign = self._match(_SIGN)
            if sign is None:
                break
            terms.append(self._term(-1.0 if sign.group(1) == "-" else 1.0))
        self._match(_SPACE)
        if self.position != len(self.text):
            self._fail("unexpected text")
        return terms


def parse_expression(text: str, key: str = EXPRESSION_KEY) -> List[Term]:
    """Parses one scalar expression."""
    return ExpressionParser(text, key).parse()


def evaluate_terms(terms: List[Term], spec: ManifoldSpec, key: str = EXPRESSION_KEY) -> np.ndarray:
    """
    :raises ConfigurationError: when a factor varies along an inactive coordinate
    """
    grid = spec.grid
    values = np.zeros(spec.shape)
    for term in terms:
        product = np.full(spec.shape, term.coefficient)
        for kind, frequency, coordinate in term.factors:
            if not grid.active[coordinate] and frequency != 0:
                raise ConfigurationError(
                    f"fields on {spec.name} do not depend on {COORDINATE_NAMES[coordinate]}", key=key
                )
            phase = 2.0 * np.pi * frequency * grid.coordinate(coordinate) / grid.periods[coordinate]
            product = product * (np.sin(phase) if kind == "sin" else np.cos(phase))
        values = values + product
    return values


def scalar_field(expression: str, spec: ManifoldSpec, key: str = EXPRESSION_KEY) -> np.ndarray:
    """A function on the grid."""
    return evaluate_terms(parse_expression(expression, key), spec, key)


def one_form_field(expressions: Mapping[str, str], spec: ManifoldSpec, key: str = EXPRESSION_KEY) -> FormField:
    """
    :param expressions: Coordinate name to coefficient expression; missing names are zero
    """
    unknown = set(expressions) - set(COORDINATE_NAMES)
    if unknown:
        raise ConfigurationError(f"unknown coordinates {sorted(unknown)}, expected {COORDINATE_NAMES}", key=key)
    components = np.zeros((4,) + spec.shape)
    for name, text in expressions.items():
        components[COORDINATE_NAMES.index(name)] = scalar_field(text, spec, f"{key}.{name}")
    return FormField(1, components)
