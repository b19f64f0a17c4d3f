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
A rectangular box in the active coordinates of a catalog chart, discretized with
tensor Gauss-Legendre nodes.

Fields on the box are arrays over the node grid (one axis per active coordinate).
Derivatives are collocation derivatives of the interpolating polynomial, volume and
face integrals are Gauss rules, and face values come from interpolation to +-1.
"""

import logging
from functools import cached_property
from typing import List
from typing import Sequence
from typing import Tuple

import numpy as np
from numpy.polynomial import legendre

from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.frame_calculus.brackets import frame_divergences
from taming_toolkit.frame_calculus.brackets import structure_coefficients

MIN_NODES = 4
DEFAULT_HALF_WIDTH = 0.5
TAIL_MODES = 2


def gauss_legendre(count: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Reference rule on [-1, 1].

    :param count: Number of nodes
    :return: nodes, weights, the collocation derivative matrix D = V' V^-1 and the
        (2, count) matrix interpolating node values to the end points -1 and +1
    """
    nodes, weights = legendre.leggauss(count)
    vandermonde = legendre.legvander(nodes, count - 1)
    derived = np.stack(
        [legendre.legval(nodes, legendre.legder(np.eye(count)[degree])) for degree in range(count)], axis=1
    )
    derivative = np.linalg.solve(vandermonde.T, derived.T).T
    ends = np.linalg.solve(vandermonde.T, legendre.legvander(np.array([-1.0, 1.0]), count - 1).T).T
    return nodes, weights, derivative, ends


class BoxDomain:
    """
    Omega = prod [lo_c, hi_c] over the active coordinates of a constant-frame,
    unimodular spec. The frame, metric and bracket constants are read off the ManifoldSpec.
    """

    def __init__(self, spec: ManifoldSpec, extents: Sequence[Sequence[float]] | None = None, nodes: int = 16):
        """
        :param spec: Catalog spec providing the chart, J and the frame
        :param extents: (lo, hi) per active coordinate, a centred box of width 1 when omitted
        :param nodes: Gauss nodes per axis
        """
        if not spec.constant_frame:
            raise ConfigurationError(f"{spec.name} has a varying frame; boxes need a constant one", key="manifold.id")
        if not spec.unimodular:
            raise ConfigurationError(f"{spec.name} is not unimodular", key="manifold.id")
        active = spec.grid.active_coordinates
        if extents is None:
            extents = [(-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH)] * len(active)
        extents = [tuple(float(end) for end in pair) for pair in extents]
        if len(extents) != len(active) or any(len(pair) != 2 or pair[0] >= pair[1] for pair in extents):
            raise ConfigurationError(
                f"need {len(active)} increasing (lo, hi) pairs for coordinates {active}", key="local.extents"
            )
        if nodes < MIN_NODES:
            raise ConfigurationError(f"at least {MIN_NODES} nodes per axis are needed", key="local.nodes")

        self.spec = spec
        self.active = active
        self.extents = extents
        self.nodes = int(nodes)
        reference, weights, derivative, ends = gauss_legendre(self.nodes)
        self._reference = reference
        self._points = [lo + 0.5 * (reference + 1.0) * (hi - lo) for lo, hi in extents]
        self._weights = [0.5 * (hi - lo) * weights for lo, hi in extents]
        self._derivatives = [2.0 / (hi - lo) * derivative for lo, hi in extents]
        self._ends = ends

        origin = (slice(None), slice(None)) + (0,) * len(spec.shape)
        self.frame = np.array(spec.frame.frame[origin])
        self.coframe = np.array(spec.frame.coframe[origin])
        self.metric = np.array(spec.metric[origin])
        self.metric_inverse = np.array(spec.metric_inverse[origin])
        self.density = float(spec.volume_density[(0,) * len(spec.shape)])
        self.fundamental_form = np.real(spec.fundamental_form[(slice(None),) + (0,) * len(spec.shape)])
        self.two_form_gram = np.array(spec.metric_compounds[2][origin])
        self.j_two = np.array(spec.j_compounds[2][origin])
        self._logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # constants of the chart

    @cached_property
    def bracket(self) -> np.ndarray:
        """B^C_{AB} of the complex frame, (4, 4, 4)."""
        full = structure_coefficients(self.spec).bracket
        return np.array(full[(slice(None),) * 3 + (0,) * len(self.spec.shape)])

    @cached_property
    def trace(self) -> np.ndarray:
        """c_j = sum_k B^{jbar}_{k kbar}"""
        return np.array([sum(self.bracket[j + 2, k, k + 2] for k in range(2)) for j in range(2)])

    @cached_property
    def frame_divergence(self) -> np.ndarray:
        """div(phi_A) for the four complex frame vectors."""
        return self.frame.T @ frame_divergences(self.spec.structure)

    @cached_property
    def normal_scale(self) -> np.ndarray:
        """|d x^c|_g for every coordinate."""
        return np.sqrt(np.diag(self.metric_inverse))

    # ------------------------------------------------------------------
    # grid

    @property
    def shape(self) -> Tuple[int, ...]:
        """Shape of a scalar field on the nodes."""
        return (self.nodes,) * len(self.active)

    @property
    def volume(self) -> float:
        """Riemannian volume of the box."""
        return self.density * float(np.prod([hi - lo for lo, hi in self.extents]))

    @property
    def center(self) -> np.ndarray:
        """Box centre in the active coordinates."""
        return np.array([0.5 * (lo + hi) for lo, hi in self.extents])

    def axis_of(self, coordinate: int) -> int | None:
        """Node axis of a coordinate, None when the coordinate is inactive."""
        return self.active.index(coordinate) if coordinate in self.active else None

    def coordinate(self, coordinate: int) -> np.ndarray:
        """Values of one coordinate on the nodes, zeros for an inactive coordinate."""
        axis = self.axis_of(coordinate)
        if axis is None:
            return np.zeros(self.shape)
        view = [1] * len(self.shape)
        view[axis] = self.nodes
        return np.broadcast_to(self._points[axis].reshape(view), self.shape)

    def reference_coordinate(self, axis: int) -> np.ndarray:
        """The node axis rescaled to [-1, 1]."""
        view = [1] * len(self.shape)
        view[axis] = self.nodes
        return np.broadcast_to(self._reference.reshape(view), self.shape)

    def refined(self, nodes: int) -> "BoxDomain":
        """The same box with another node count."""
        return BoxDomain(self.spec, self.extents, nodes)

    # ------------------------------------------------------------------
    # calculus

    def _along(self, matrix: np.ndarray, values: np.ndarray, axis: int) -> np.ndarray:
        position = values.ndim - len(self.shape) + axis
        moved = np.tensordot(matrix, np.moveaxis(values, position, 0), axes=(1, 0))
        return np.moveaxis(moved, 0, position)

    def derivative(self, values: np.ndarray, coordinate: int) -> np.ndarray:
        """d/dx^coordinate on the trailing node axes; zero for inactive coordinates."""
        axis = self.axis_of(coordinate)
        if axis is None:
            return np.zeros_like(values)
        return self._along(self._derivatives[axis], values, axis)

    def vector_derivative(self, values: np.ndarray, vector: np.ndarray) -> np.ndarray:
        """sum_a vector[a] d/dx^a applied to a field, vector constant or a node field."""
        result = np.zeros(values.shape, dtype=np.result_type(values, vector, float))
        for coordinate in self.active:
            result = result + vector[coordinate] * self.derivative(values, coordinate)
        return result

    def complex_derivative(self, values: np.ndarray, slot: int) -> np.ndarray:
        """e_1, e_2, conj e_1 or conj e_2 (slot 0..3) applied to a field."""
        return self.vector_derivative(values, self.frame[:, slot])

    @cached_property
    def quadrature_weights(self) -> np.ndarray:
        """Tensor Gauss weights times the volume density."""
        weights = self._weights[0]
        for factor in self._weights[1:]:
            weights = np.multiply.outer(weights, factor)
        return self.density * weights

    def integrate(self, values: np.ndarray) -> complex | float:
        """Integral against vol_g over the box."""
        return np.sum(self.quadrature_weights * values)

    def faces(self) -> List[Tuple[int, int]]:
        """(coordinate, side) for all faces, side -1 for lo and +1 for hi."""
        return [(coordinate, side) for coordinate in self.active for side in (-1, 1)]

    def face_values(self, values: np.ndarray, coordinate: int, side: int) -> np.ndarray:
        """Interpolated values on one face, the face axis removed."""
        axis = self.axis_of(coordinate)
        row = self._ends[0 if side < 0 else 1]
        position = values.ndim - len(self.shape) + axis
        return np.tensordot(np.moveaxis(values, position, -1), row, axes=(-1, 0))

    def face_integral(self, values: np.ndarray, coordinate: int) -> complex | float:
        """Integral against the induced measure of face values of a scalar."""
        axis = self.axis_of(coordinate)
        others = [weights for index, weights in enumerate(self._weights) if index != axis]
        weights = np.ones(())
        for factor in others:
            weights = np.multiply.outer(weights, factor)
        return self.density * self.normal_scale[coordinate] * np.sum(weights * values)

    def boundary_integral(self, vector: np.ndarray, values: np.ndarray) -> complex | float:
        """
        int over the boundary of (L r) f for L = sum_a vector[a] d/dx^a, with vector
        constant (shape (4,)) or a node field (shape (4, *shape)).
        """
        total = 0.0
        for coordinate, side in self.faces():
            component = vector[coordinate]
            if np.ndim(component):
                component = self.face_values(component, coordinate, side)
            normal = side * component / self.normal_scale[coordinate]
            total = total + self.face_integral(normal * self.face_values(values, coordinate, side), coordinate)
        return total

    # ------------------------------------------------------------------
    # defining function

    @cached_property
    def collar(self) -> float:
        """Corner smoothing width, half the gap between the outermost nodes and the faces."""
        gaps = [float(min(points[0] - lo, hi - points[-1])) for points, (lo, hi) in zip(self._points, self.extents)]
        return 0.5 * min(gaps)

    def defining_function(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        r and |dr|_g at points given as (n, len(active)) active coordinates.

        r is the signed distance to the nearest face, with the two largest face
        distances blended by a quadratic smooth maximum within the collar.
        """
        points = np.atleast_2d(points)
        distances = []
        gradients = []
        for axis, coordinate in enumerate(self.active):
            lo, hi = self.extents[axis]
            scale = self.normal_scale[coordinate]
            unit = np.zeros(4)
            unit[coordinate] = 1.0 / scale
            distances.append((points[:, axis] - hi) / scale)
            gradients.append(unit)
            distances.append((lo - points[:, axis]) / scale)
            gradients.append(-unit)
        distances = np.stack(distances, axis=1)
        gradients = np.stack(gradients)
        order = np.argsort(-distances, axis=1)
        rows = np.arange(len(points))
        top = distances[rows, order[:, 0]]
        second = distances[rows, order[:, 1]]
        blend = np.maximum(self.collar - (top - second), 0.0) / self.collar
        values = top + 0.25 * self.collar * blend**2
        share = 0.5 * blend[:, np.newaxis]
        gradient = (1.0 - share) * gradients[order[:, 0]] + share * gradients[order[:, 1]]
        norms = np.sqrt(np.einsum("na,ab,nb->n", gradient, self.metric_inverse, gradient))
        return values, norms

    def node_points(self) -> np.ndarray:
        """All nodes as (n, len(active)) coordinates."""
        mesh = np.meshgrid(*self._points, indexing="ij")
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    def face_points(self, coordinate: int, side: int) -> np.ndarray:
        """Face quadrature points as (n, len(active)) coordinates."""
        axis = self.axis_of(coordinate)
        lists = list(self._points)
        lo, hi = self.extents[axis]
        lists[axis] = np.array([lo if side < 0 else hi])
        mesh = np.meshgrid(*lists, indexing="ij")
        return np.stack([values.ravel() for values in mesh], axis=1)

    def defining_function_report(self) -> dict:
        """max r over the nodes, max |r| and max ||dr| - 1| over the face points."""
        inside, _ = self.defining_function(self.node_points())
        on_face = 0.0
        normal = 0.0
        for coordinate, side in self.faces():
            values, norms = self.defining_function(self.face_points(coordinate, side))
            on_face = max(on_face, float(np.max(np.abs(values))))
            normal = max(normal, float(np.max(np.abs(norms - 1.0))))
        return {"max_r_inside": float(np.max(inside)), "max_abs_r_on_faces": on_face, "max_dr_defect": normal}

    # ------------------------------------------------------------------
    # resolution

    def resolution_defect(self, values: np.ndarray) -> float:
        """
        Largest relative weight of the top Legendre modes along any axis; small when
        the node count resolves the field.
        """
        values = np.asarray(values)
        scale = float(np.max(np.abs(values))) if values.size else 0.0
        if scale == 0.0:
            return 0.0
        vandermonde = legendre.legvander(self._reference, self.nodes - 1)
        worst = 0.0
        for axis in range(len(self.shape)):
            modal = self._along(np.linalg.inv(vandermonde), values, axis)
            offset = values.ndim - len(self.shape)
            tail = np.take(modal, range(self.nodes - TAIL_MODES, self.nodes), axis=offset + axis)
            worst = max(worst, float(np.max(np.abs(tail))) / scale)
        return worst
