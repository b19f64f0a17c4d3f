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

import numpy as np

from taming_toolkit.dataclass.manifold_spec import FrameField
from taming_toolkit.errors import FrameDegeneracyError
from taming_toolkit.numerics import pointwise

DUALITY_TOLERANCE = 1e-12


def complex_frame(almost_complex: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """
    Builds e_i = (X_i - sqrt(-1) J X_i) / 2 from two real anchor vectors.

    :param almost_complex: J field (4, 4, *shape)
    :param anchors: Real vector fields (4, 2, *shape), columns X_1, X_2
    :return: Complex frame (4, 4, *shape) with columns e_1, e_2, conj e_1, conj e_2
    """
    rotated = pointwise.matmul(almost_complex, anchors)
    holomorphic = 0.5 * (anchors - 1j * rotated)
    return np.concatenate([holomorphic, np.conj(holomorphic)], axis=1)


def dual_coframe(frame: np.ndarray) -> FrameField:
    """
    Pointwise dual of a complex frame: theta^A(e_B) = delta^A_B.

    :param frame: (4, 4, *shape) complex frame, columns are frame vectors
    :return: FrameField with the coframe rows and both second compounds
    :raises FrameDegeneracyError: when the frame is singular or the duality residual is too large
    """
    coframe = pointwise.inverse(frame, what="complex frame")
    identity = np.eye(4).reshape((4, 4) + (1,) * (frame.ndim - 2))
    residual = float(np.max(np.abs(pointwise.matmul(coframe, frame) - identity)))
    if residual > DUALITY_TOLERANCE:
        raise FrameDegeneracyError(f"coframe duality residual {residual:.3e} exceeds {DUALITY_TOLERANCE}")
    return FrameField(
        frame=frame,
        coframe=coframe,
        frame_compound2=pointwise.compound(frame, 2),
        coframe_compound2=pointwise.compound(coframe, 2),
        duality_residual=residual,
    )
