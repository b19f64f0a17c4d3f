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
Check suites of the verify task. Each suite returns one TermTable.
"""

import logging
from typing import List

import numpy as np

from taming_toolkit.dataclass.elliptic_solve_config import EllipticSolveConfig
from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.dataclass.term_table import TermRow
from taming_toolkit.dataclass.term_table import TermTable
from taming_toolkit.elliptic.lejmi import LejmiOperator
from taming_toolkit.elliptic.w_operators import WOperatorBuilder
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.frame_calculus.brackets import FrameCalculus
from taming_toolkit.frame_calculus.chern import ChernConnection
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.hilbert.estimates import hormander_solve
from taming_toolkit.hilbert.estimates import random_complex
from taming_toolkit.numerics.random_fields import random_form
from taming_toolkit.numerics.random_fields import random_function

DECOMPOSITION_TOLERANCE = 1e-10
KAHLER_TOLERANCE = 1e-9
SIGMA_TOLERANCE = 1e-10
ADJOINT_TOLERANCE = 1e-7
CHERN_TOLERANCE = 1e-9
HORMANDER_TOLERANCE = 1e-9
# varying frames alias in pointwise products
LOOSE_FACTOR = 1e3
HORMANDER_COMPLEXES = 20
HORMANDER_MAX_DIMENSION = 60
FLAT_TORUS_CONSTANT_KERNEL = 2

logger = logging.getLogger(__name__)


def _relative(defect: FormField, reference: FormField) -> float:
    return defect.max_abs() / max(reference.max_abs(), 1e-300)


def loosened(spec: ManifoldSpec, tolerance: float) -> float:
    """The tolerance, widened on specs whose frame varies over the grid."""
    return tolerance if spec.constant_frame else tolerance * LOOSE_FACTOR


def identity_suite(spec: ManifoldSpec, calculus: ExteriorCalculus, seed: int, samples: int, tolerance: float):
    """
    d d = 0, ** = (-1)^(p(4-p)), <da, b> = <a, d* b>, d* = -*d* on constant frames,
    *J a = a ^ F, J^2 = 1 on 2-forms, Leibniz, |d+ a|^2 = |d- a|^2 and the d+ split.
    """
    rng = np.random.default_rng(seed)
    table = TermTable("identities")
    tolerance = loosened(spec, tolerance)
    worst = {
        name: 0.0
        for name in (
            "d_squared",
            "star_squared",
            "adjoint",
            "star_j_one_form",
            "j_squared_two_forms",
            "leibniz",
            "energy_gap",
            "stokes_energy",
        )
    }
    decomposition = 0.0
    co_differential = 0.0
    for _ in range(samples):
        function = FormField.scalar(random_function(spec, rng))
        one_form = random_form(spec, rng, 1)
        two_form = random_form(spec, rng, 2)

        worst["d_squared"] = max(
            worst["d_squared"],
            _relative(calculus.d(calculus.d(function)), calculus.d(function)),
            _relative(calculus.d(calculus.d(one_form)), calculus.d(one_form)),
        )
        for form in (function, one_form, two_form):
            sign = (-1.0) ** (form.degree * (4 - form.degree))
            twice = calculus.hodge_star(calculus.hodge_star(form))
            worst["star_squared"] = max(worst["star_squared"], _relative(twice - form * sign, form))

        left = calculus.inner(calculus.d(one_form), two_form)
        right = calculus.inner(one_form, calculus.d_star(two_form))
        scale = max(calculus.norm(calculus.d(one_form)) * calculus.norm(two_form), 1e-300)
        worst["adjoint"] = max(worst["adjoint"], abs(left - right) / scale)

        star_j = calculus.hodge_star(calculus.j_act(one_form))
        wedge_f = calculus.wedge(one_form, calculus.fundamental_form())
        worst["star_j_one_form"] = max(worst["star_j_one_form"], _relative(star_j - wedge_f, one_form))
        worst["j_squared_two_forms"] = max(
            worst["j_squared_two_forms"], _relative(calculus.j_act(calculus.j_act(two_form)) - two_form, two_form)
        )
        smooth = random_form(spec, rng, 1, band=1)
        worst["leibniz"] = max(worst["leibniz"], calculus.leibniz_defect(smooth, random_form(spec, rng, 1, band=1)))

        gap, integral = calculus.anti_self_dual_energy_gap(one_form)
        energy = max(calculus.norm(calculus.d(one_form)) ** 2, 1e-300)
        worst["energy_gap"] = max(worst["energy_gap"], abs(gap) / energy)
        worst["stokes_energy"] = max(worst["stokes_energy"], abs(integral) / energy)

        decomposition = max(decomposition, calculus.d_plus_decomposition_residual(one_form))
        if spec.constant_frame:
            for form in (one_form, two_form):
                hodge_form = calculus.hodge_star(calculus.d(calculus.hodge_star(form)))
                co_differential = max(co_differential, _relative(calculus.d_star(form) + hodge_form, form))

    for name, value in worst.items():
        table.add(TermRow.check(name, value, tolerance))
    table.add(TermRow.check("d_plus_split", decomposition, DECOMPOSITION_TOLERANCE))
    if spec.constant_frame:
        table.add(TermRow.check("d_star_is_minus_star_d_star", co_differential, tolerance))
    table.summary = {"spec": spec.name, "samples": samples}
    return table


def kahler_baseline(spec: ManifoldSpec, builder: WOperatorBuilder, seed: int, samples: int) -> TermTable:
    """
    sigma1 = sigma2 = 0 and D~ f = -2 sqrt(-1) del delbar f on a Kaehler spec.
    """
    rng = np.random.default_rng(seed)
    frames = FrameCalculus(spec, builder.calculus)
    table = TermTable("kahler_baseline")
    worst_sigma = 0.0
    worst_d_tilde = 0.0
    for _ in range(samples):
        values, _ = builder.prepare(random_function(spec, rng))
        size = max(float(np.sqrt(np.real(spec.integrate(spec.volume_density * values**2)))), 1e-300)
        bundle = builder.bundle(values)
        worst_sigma = max(
            worst_sigma,
            builder.calculus.norm(bundle.sigma1.form) / size,
            builder.calculus.norm(bundle.sigma2.form) / size,
        )
        expected = frames.del_delbar(values) * (-2.0j)
        worst_d_tilde = max(worst_d_tilde, builder.calculus.norm(bundle.d_tilde - expected) / size)
    table.add(TermRow.check("sigma_vanish", worst_sigma, SIGMA_TOLERANCE))
    table.add(TermRow.check("d_tilde_is_del_delbar", worst_d_tilde, KAHLER_TOLERANCE))
    table.summary = {"spec": spec.name, "samples": samples}
    return table


def w_operator_suite(spec: ManifoldSpec, builder: WOperatorBuilder, seed: int, samples: int, tolerance: float):
    """The contracts of W and W~, the d*(f omega) chain and the adjoint identities."""
    rng = np.random.default_rng(seed)
    calculus = builder.calculus
    tolerance = loosened(spec, tolerance)
    table = TermTable("w_operators")
    worst = {}
    adjoint_w = 0.0
    adjoint_w_tilde = 0.0
    for _ in range(samples):
        values, _ = builder.prepare(random_function(spec, rng))
        bundle = builder.bundle(values)
        for name, value in bundle.residuals.items():
            worst[name] = max(worst.get(name, 0.0), value)
        for name, value in builder.w_identity_residuals(values, bundle).items():
            if name != "d_tilde_F_pairing":
                worst[name] = max(worst.get(name, 0.0), value)

        partner, _ = builder.prepare(random_function(spec, rng))
        partner_bundle = builder.bundle(partner)
        function = FormField.scalar(values)
        for name, image, admissible, adjoint in (
            ("w", bundle.w, partner_bundle.w, builder.adjoint_W),
            ("w_tilde", bundle.w_tilde, partner_bundle.w_tilde, builder.adjoint_W_tilde),
        ):
            left = calculus.inner(image, admissible)
            right = calculus.inner(function, FormField.scalar(adjoint(admissible)))
            scale = max(calculus.norm(image) * calculus.norm(admissible), 1e-300)
            if name == "w":
                adjoint_w = max(adjoint_w, abs(left - right) / scale)
            else:
                adjoint_w_tilde = max(adjoint_w_tilde, abs(left - right) / scale)

    for name, value in worst.items():
        table.add(TermRow.check(name, value, tolerance))
    table.add(TermRow.check("adjoint_w", adjoint_w, ADJOINT_TOLERANCE))
    table.add(TermRow.check("adjoint_w_tilde", adjoint_w_tilde, ADJOINT_TOLERANCE))
    table.summary = {"spec": spec.name, "samples": samples}
    return table


def chern_suite(spec: ManifoldSpec) -> TermTable:
    """Closed formula against the defining-property solve; Gamma = 0 on the flat torus."""
    connection = ChernConnection(spec)
    table = TermTable("chern")
    table.add(TermRow.check("formula_vs_defining_solve", connection.compare_with_defining_solve(), CHERN_TOLERANCE))
    if spec.name == FLAT_TORUS:
        table.add(TermRow.check("flat_gamma", float(np.max(np.abs(connection.gamma()))), CHERN_TOLERANCE))
    return table


def lejmi_suite(spec: ManifoldSpec, calculus: ExteriorCalculus, config: EllipticSolveConfig, seed: int, tolerance):
    """Symmetry of P on anti-invariant forms and the constant-sector kernel."""
    rng = np.random.default_rng(seed)
    lejmi = LejmiOperator(spec, calculus, config)
    first = lejmi.project(random_form(spec, rng, 2))
    second = lejmi.project(random_form(spec, rng, 2))
    image_first = lejmi.lejmi_apply(first)
    image_second = lejmi.lejmi_apply(second)
    asymmetry = abs(calculus.inner(image_first, second) - calculus.inner(first, image_second))
    scale = max(calculus.norm(image_first) * calculus.norm(second), 1e-300)

    table = TermTable("lejmi")
    table.add(TermRow.check("self_adjoint", asymmetry / scale, tolerance))
    dimension = lejmi.lejmi_kernel(sector="constant").dimension
    if spec.name == FLAT_TORUS:
        table.add(TermRow.check("constant_kernel_dimension", dimension - FLAT_TORUS_CONSTANT_KERNEL, 0.0))
    else:
        table.add(TermRow.info("constant_kernel_dimension", dimension))
    table.summary = {"constant_kernel_dimension": dimension}
    return table


def hormander_oracle(seed: int, count: int = HORMANDER_COMPLEXES, largest: int = HORMANDER_MAX_DIMENSION):
    """hormander_solve against the SVD pseudoinverse on random exact complexes."""
    rng = np.random.default_rng(seed)
    table = TermTable("hormander_oracle")
    worst = 0.0
    violations = 0
    dimensions: List[List[int]] = []
    for _ in range(count):
        first, middle = (int(size) for size in rng.integers(2, largest + 1, size=2))
        rank = int(rng.integers(1, min(first, middle) + 1))
        last = int(rng.integers(middle - rank, middle - rank + 4))
        cx = random_complex(rng, (first, middle, last), rank)
        target = cx.t_matrix @ rng.standard_normal(first)
        oracle = np.linalg.pinv(cx.t_matrix) @ target
        report = hormander_solve(cx, target, tolerance=1e-8)
        error = float(np.linalg.norm(report.solution - oracle))
        worst = max(worst, error / max(float(np.linalg.norm(oracle)), 1e-300))
        violations += int(report.bounds["bound_holds"] < 1.0)
        dimensions.append([first, middle, last])
    table.add(TermRow.check("pseudoinverse_agreement", worst, HORMANDER_TOLERANCE))
    table.add(TermRow.check("bound_violations", violations, 0.0))
    table.summary = {"dimensions": dimensions}
    logger.info("Hoermander oracle over %d complexes: worst %.3e", count, worst)
    return table
