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
The six tasks of the runner. Each takes a RunConfig and returns a TaskOutcome;
nothing here writes files.
"""

import logging
import time
from typing import Callable
from typing import Dict

import numpy as np

from taming_toolkit.cli.expressions import one_form_field
from taming_toolkit.cli.expressions import scalar_field
from taming_toolkit.cli.suites import chern_suite
from taming_toolkit.cli.suites import hormander_oracle
from taming_toolkit.cli.suites import identity_suite
from taming_toolkit.cli.suites import kahler_baseline
from taming_toolkit.cli.suites import lejmi_suite
from taming_toolkit.cli.suites import loosened
from taming_toolkit.cli.suites import w_operator_suite
from taming_toolkit.dataclass.form_field import FormField
from taming_toolkit.dataclass.manifold_spec import ManifoldSpec
from taming_toolkit.dataclass.run_config import RunConfig
from taming_toolkit.dataclass.task_outcome import TaskOutcome
from taming_toolkit.dataclass.term_table import TermRow
from taming_toolkit.dataclass.term_table import TermTable
from taming_toolkit.elliptic.w_operators import WOperatorBuilder
from taming_toolkit.errors import ConfigurationError
from taming_toolkit.forms.exterior_calculus import ExteriorCalculus
from taming_toolkit.frame_calculus.brackets import FrameCalculus
from taming_toolkit.geometry.catalog import FLAT_TORUS
from taming_toolkit.geometry.catalog import build_manifold
from taming_toolkit.hilbert.ahs import ahs_constant
from taming_toolkit.hilbert.assembly import GalerkinAssembler
from taming_toolkit.hilbert.estimates import closed_range_table
from taming_toolkit.hilbert.estimates import estimate_trend
from taming_toolkit.hilbert.pipeline import Theorem1Pipeline
from taming_toolkit.io.sidecar import read_field
from taming_toolkit.local_domain.box import BoxDomain
from taming_toolkit.local_domain.estimates import SLACK_TOLERANCE
from taming_toolkit.local_domain.estimates import LocalEstimator
from taming_toolkit.numerics.random_fields import random_form
from taming_toolkit.numerics.random_fields import random_function

SPECTRUM_OPERATORS = ("d0", "w_tilde", "d_minus_j")
DEGENERACY_INFLATION = 10.0
# seed offsets of the verify suites
SUITE_SEED_OFFSETS = {"identities": 0, "kahler": 1, "w_operators": 2, "lejmi": 3, "hormander": 4}


class TaskRunner:
    """
    Runs one configured task on the configured manifold.
    """

    def __init__(self, config: RunConfig):
        """
        :param config: The resolved run configuration
        """
        self.config = config
        self._spec: ManifoldSpec | None = None
        self._logger = logging.getLogger(self.__class__.__name__)
        self._tasks: Dict[str, Callable[[], TaskOutcome]] = {
            "verify": self.verify,
            "spectrum": self.spectrum,
            "solve-w": self.solve_w,
            "theorem1": self.theorem1,
            "local": self.local,
            "coefficients": self.coefficients,
        }

    @property
    def spec(self) -> ManifoldSpec:
        """The manifold, built on first use."""
        if self._spec is None:
            self._spec = build_manifold(self.config.manifold_id, self.config.grid, self.config.manifold_params)
        return self._spec

    def run(self) -> TaskOutcome:
        """Runs the configured task."""
        task = self._tasks.get(self.config.task)
        if task is None:
            raise ConfigurationError(f"unknown task '{self.config.task}'", key="task")
        self._logger.info("running %s on %s", self.config.task, self.config.manifold_id)
        started = time.perf_counter()
        outcome = task()
        outcome.timings["total"] = time.perf_counter() - started
        outcome.sections.setdefault("manifold", self.manifold_section())
        return outcome

    def manifold_section(self):
        """The manifold summary with its construction diagnostics."""
        section = self.spec.to_dict()
        section["diagnostics"] = dict(self.spec.diagnostics)
        section["constant_frame"] = self.spec.constant_frame
        return section

    def _timed(self, outcome: TaskOutcome, name: str, build: Callable[[], TermTable]) -> TermTable:
        started = time.perf_counter()
        table = build()
        outcome.timings[name] = time.perf_counter() - started
        outcome.tables.append(table)
        level = logging.INFO if table.passed else logging.WARNING
        self._logger.log(level, "%s: %s", table.title, "passed" if table.passed else f"failed {table.failed()}")
        return table

    # ------------------------------------------------------------------
    # inputs

    def scalar_input(self) -> np.ndarray:
        """f from the expression, the field file or the seed, in that order."""
        config = self.config
        if isinstance(config.field_expression, str):
            return scalar_field(config.field_expression, self.spec)
        if config.field_expression is not None:
            raise ConfigurationError("solve-w needs a scalar expression", key="field.expression")
        if config.field_file is not None:
            return self._file_input((self.spec.shape,))
        return random_function(self.spec, np.random.default_rng(config.seed))

    def one_form_input(self) -> FormField:
        """a from the expression map, the field file or the seed, in that order."""
        config = self.config
        if isinstance(config.field_expression, str):
            raise ConfigurationError("theorem1 needs a map of coordinate to expression", key="field.expression")
        if config.field_expression is not None:
            return one_form_field(config.field_expression, self.spec)
        if config.field_file is not None:
            return FormField(1, self._file_input(((4,) + self.spec.shape,)))
        band = max(1, min(self.config.cutoff, min(self.spec.grid.active_resolution) // 2 - 1))
        return random_form(self.spec, np.random.default_rng(config.seed), 1, band=band, with_constant=False)

    def _file_input(self, shapes) -> np.ndarray:
        values, _ = read_field(self.config.field_file)
        if values.shape not in shapes:
            raise ConfigurationError(f"field of shape {values.shape}, expected one of {shapes}", key="field.file")
        return np.real(values) if np.iscomplexobj(values) and not np.any(values.imag) else values

    # ------------------------------------------------------------------
    # tasks

    def verify(self) -> TaskOutcome:
        """The identity suites, the operator contracts and the oracles."""
        config = self.config
        spec = self.spec
        calculus = ExteriorCalculus(spec)
        builder = WOperatorBuilder(spec, calculus, config.solver)
        seeds = {name: config.seed + offset for name, offset in SUITE_SEED_OFFSETS.items()}
        outcome = TaskOutcome("verify")
        tolerances = config.tolerances

        self._timed(
            outcome,
            "identities",
            lambda: identity_suite(spec, calculus, seeds["identities"], config.samples, tolerances.identity),
        )
        if spec.kahler:
            self._timed(outcome, "kahler", lambda: kahler_baseline(spec, builder, seeds["kahler"], config.samples))
        self._timed(
            outcome,
            "w_operators",
            lambda: w_operator_suite(spec, builder, seeds["w_operators"], config.samples, tolerances.relative),
        )
        self._timed(outcome, "chern", lambda: chern_suite(spec))
        self._timed(
            outcome, "lejmi", lambda: lejmi_suite(spec, calculus, config.solver, seeds["lejmi"], tolerances.relative)
        )
        self._timed(outcome, "hormander", lambda: hormander_oracle(seeds["hormander"]))

        frames = FrameCalculus(spec, calculus)
        structure = TermTable("frame_calculus")
        structure.add(TermRow.check("structure_equation", frames.structure_equation_residual(), tolerances.identity))
        sample = random_function(spec, np.random.default_rng(config.seed))
        structure.add(
            TermRow.check("bracket_expansion", frames.bracket_residual(sample), loosened(spec, tolerances.identity))
        )
        integrability = frames.integrability_defect()
        if spec.integrable:
            structure.add(TermRow.check("integrability_defect", integrability, tolerances.identity))
        else:
            structure.add(TermRow.info("integrability_defect", integrability))
        structure.add(TermRow.info("nijenhuis_norm", frames.nijenhuis_norm()))
        outcome.tables.append(structure)
        return outcome

    def spectrum(self) -> TaskOutcome:
        """Closed-range gaps per cutoff, the estimate constant trend and the AHS constant."""
        config = self.config
        assembler = GalerkinAssembler(self.spec, config=config.solver)
        outcome = TaskOutcome("spectrum")
        started = time.perf_counter()
        rows = closed_range_table(assembler, SPECTRUM_OPERATORS, config.cutoffs)
        outcome.timings["closed_range"] = time.perf_counter() - started

        table = TermTable("spectrum")
        for row in rows:
            prefix = f"{row['operator']}.K{row['cutoff']}"
            table.add(TermRow.info(f"{prefix}.gap", row["gap"] if row["gap"] is not None else 0.0))
            table.add(TermRow.info(f"{prefix}.collapse", float(row["collapse"])))
        trend = estimate_trend(assembler, config.cutoffs)
        table.add(TermRow.info("estimate_constant", trend.constant))
        ahs = ahs_constant(assembler, config.cutoff)
        table.add(TermRow.info("ahs_constant", ahs.constant))
        table.add(TermRow.info("ahs_bound", ahs.provenance["ahs_bound"]))
        outcome.timings["estimates"] = time.perf_counter() - started
        outcome.tables.append(table)
        outcome.sections.update({"closed_range": rows, "estimate": trend.to_dict(), "ahs": ahs.to_dict()})
        return outcome

    def solve_w(self) -> TaskOutcome:
        """W, W~ and D~ for one f with their residuals and the chain identities."""
        config = self.config
        spec = self.spec
        builder = WOperatorBuilder(spec, config=config.solver)
        outcome = TaskOutcome("solve-w")
        started = time.perf_counter()
        bundle = builder.bundle(self.scalar_input())
        outcome.timings["bundle"] = time.perf_counter() - started
        identities = builder.w_identity_residuals(bundle.f, bundle)
        outcome.timings["identities"] = time.perf_counter() - started

        tolerance = loosened(spec, config.tolerances.relative)
        table = TermTable("solve_w")
        for name, value in bundle.residuals.items():
            table.add(TermRow.check(name, value, tolerance))
        for name, value in identities.items():
            if name == "d_tilde_F_pairing":
                table.add(TermRow.info(name, value))
            else:
                table.add(TermRow.check(name, value, loosened(spec, config.tolerances.identity)))
        for name, value in bundle.defects.items():
            table.add(TermRow.info(name, value))
        table.summary = {
            "sigma1_iterations": bundle.sigma1.iterations,
            "sigma2_iterations": bundle.sigma2.iterations,
        }
        outcome.tables.append(table)
        outcome.fields.update(
            {
                "f": bundle.f,
                "w": bundle.w.components,
                "w_tilde": bundle.w_tilde.components,
                "d_tilde": bundle.d_tilde.components,
                "sigma1": bundle.sigma1.form.components,
                "sigma2": bundle.sigma2.form.components,
            }
        )
        return outcome

    def theorem1(self) -> TaskOutcome:
        """D~ f = da for the configured a, with the norm bound and the route comparison."""
        config = self.config
        spec = self.spec
        pipeline = Theorem1Pipeline(spec, config.cutoff, config=config.solver)
        outcome = TaskOutcome("theorem1")
        alpha = self.one_form_input()
        report = pipeline.run(alpha)
        outcome.timings.update(report.timings)

        tolerance = config.tolerances.solver
        table = TermTable("theorem1")
        table.add(TermRow.check("d_tilde_residual", report.residuals["d_tilde"], tolerance))
        table.add(TermRow.check("routes_agree", report.residuals["routes_agree"], tolerance))
        margin = report.bounds["c1_times_norm_psi"] - report.bounds["norm_f"]
        table.add(TermRow.at_least("bound_margin", margin, 1e-9 * max(report.bounds["c1_times_norm_psi"], 1.0)))
        for name in ("direct_least_squares", "hormander_range", "d_minus_used"):
            if name in report.residuals:
                table.add(TermRow.info(name, report.residuals[name]))
        for name, value in report.defects.items():
            table.add(TermRow.info(name, value))
        table.add(TermRow.info("c1", report.constant))
        outcome.tables.append(table)
        outcome.sections["theorem1"] = report.to_dict()
        outcome.fields["f"] = report.solution

        if config.widen is not None:
            started = time.perf_counter()
            demo = pipeline.degeneracy_demo(config.widen)
            outcome.timings["degeneracy_demo"] = time.perf_counter() - started
            widened = TermTable("degeneracy")
            if spec.name == FLAT_TORUS and config.widen == "harmonic":
                widened.add(TermRow.at_least("inflation_over_10", demo["inflation"] - DEGENERACY_INFLATION, 0.0))
            widened.add(TermRow.info("inflation", demo["inflation"]))
            widened.add(TermRow.info("base_constant", demo["base_constant"]))
            widened.add(TermRow.info("widened_constant", demo["widened_constant"]))
            outcome.tables.append(widened)
            outcome.sections["degeneracy"] = demo
        return outcome

    def local(self) -> TaskOutcome:
        """The weighted local estimate on a box and the divergence lemma under refinement."""
        config = self.config
        settings = config.local
        domain = BoxDomain(self.spec, settings.extents, settings.nodes)
        estimator = LocalEstimator(domain, strict=config.strict)
        outcome = TaskOutcome("local")

        started = time.perf_counter()
        if settings.weight == "zero":
            weight = np.zeros(domain.shape)
        else:
            weight, _, _ = estimator.default_weight(settings.weight_scale)
        field = estimator.make_field(settings.u_recipe, weight, config.seed)
        report = estimator.local_estimate_report(field, config.tolerances.estimate, SLACK_TOLERANCE)
        outcome.timings["estimate"] = time.perf_counter() - started
        outcome.tables.append(report)

        counts = sorted({max(4, settings.nodes // 4), max(5, settings.nodes // 2), settings.nodes})
        convergence = estimator.div_lemma_convergence(self._lemma_vector, self._lemma_values, counts)
        outcome.timings["div_lemma"] = time.perf_counter() - started
        lemma = TermTable("div_lemma")
        lemma.add(TermRow.check("finest_residual", convergence["residuals"][-1], config.tolerances.estimate))
        if len(counts) >= 3:
            lemma.add(TermRow.at_least("order_over_2", convergence["order"] - 2.0, 0.0))
        outcome.tables.append(lemma)
        outcome.sections["div_lemma"] = convergence
        outcome.sections["defining_function"] = domain.defining_function_report()
        return outcome

    @staticmethod
    def _lemma_vector(domain: BoxDomain) -> np.ndarray:
        vector = np.zeros((4,) + domain.shape)
        for coordinate in domain.active:
            vector[coordinate] = 1.0 + 0.5 * np.sin(domain.coordinate((coordinate + 1) % 4) + coordinate)
        return vector

    @staticmethod
    def _lemma_values(domain: BoxDomain) -> np.ndarray:
        total = sum(domain.coordinate(coordinate) for coordinate in domain.active)
        return np.exp(0.5 * total) * np.cos(total)

    def coefficients(self) -> TaskOutcome:
        """Structure coefficients, N and divergences at the configured point."""
        spec = self.spec
        frames = FrameCalculus(spec)
        index = spec.grid.point_index(self.config.at)
        outcome = TaskOutcome("coefficients")
        table = TermTable("coefficients")
        table.add(TermRow.info("nijenhuis_norm", frames.nijenhuis_norm()))
        table.add(TermRow.info("max_bracket", frames.coefficients.max_abs()))
        table.add(
            TermRow.check("structure_equation", frames.structure_equation_residual(), self.config.tolerances.identity)
        )
        outcome.tables.append(table)
        outcome.sections["coefficients"] = {"index": list(index), "at": list(self.config.at)}
        outcome.sections["coefficients"].update(frames.coefficients_at(index))
        return outcome
