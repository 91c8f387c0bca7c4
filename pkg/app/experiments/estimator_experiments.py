"""
Estimator Experiments
---------------------
Inequality checks over seeded test families, one ConstantReport row per sweep point:
 - dispersive, Strichartz (with the logarithmic endpoint and the inverse-gradient pair), weighted Strichartz items 1 and 2
 - localized L^inf decay, weighted L^2-L^2 propagation, dyadic shell transport
 - weighted dyadic checks (shell equivalence, Bernstein, Riesz) and the A_2 characteristic
"""

import logging
from typing import Any, Callable, ClassVar

import numpy as np
from pydantic import BaseModel

from app.dyadic.weighted import weighted_bernstein_check, weighted_riesz_check, weighted_shell_equivalence_check
from app.estimator import (
    CubeSet,
    Endpoint,
    a2_constant,
    check_dispersive,
    check_localized_linfty,
    check_shell_transport,
    check_strichartz,
    check_weighted_l2l2,
    check_weighted_strichartz,
    make_family,
    refinement_gate,
)
from app.experiments.base_experiment import BaseExperiment, ExperimentError, PointResult, scalar_items
from app.schemas.experiment import (
    A2Params,
    DispersiveParams,
    ExperimentConfig,
    LocalizedParams,
    LogEndpointParams,
    ShellTransportParams,
    StrichartzInverseParams,
    StrichartzParams,
    WeightedL2L2Params,
    WeightedShellParams,
    WeightedStrichartzFirstParams,
    WeightedStrichartzSecondParams,
)
from app.schemas.family import TestFamily
from app.schemas.report import ConstantReport

logger = logging.getLogger(__name__)

# Keys routed to the test family; `k` goes to both the family and the check
FAMILY_KEYS = ("count", "support_radius", "radius", "k_lo", "k_hi", "profile")
SHARED_KEYS = ("k",)


def split_point(point: dict[str, Any]) -> tuple[dict[str, Any], dict[str, Any]]:
    """(family overrides, check parameters) of one sweep point."""
    family = {key: point[key] for key in FAMILY_KEYS + SHARED_KEYS if key in point}
    params = {key: value for key, value in point.items() if key not in FAMILY_KEYS}
    return family, params


def build_family(config: ExperimentConfig, overrides: dict[str, Any]) -> TestFamily:
    if config.family is None:
        raise ExperimentError("this experiment needs a [family] section")
    values = {"seed": config.seed, **config.family, **overrides}
    return TestFamily.model_validate(values)


def _report_rows(point: dict[str, Any], reports: list[ConstantReport]) -> PointResult:
    rows = [{**scalar_items(point), **report.to_row()} for report in reports]
    sups = [report.sup_ratio for report in reports if report.valid and report.sup_ratio is not None]
    changes = [report.extras.get("refinement_change") for report in reports if "refinement_change" in report.extras]
    summary = {"sup_ratio": max(sups) if sups else None}
    if changes:
        summary["refinement_change"] = max(changes)
    return PointResult(rows=rows, summary=summary)


class FamilyCheckExperiment(BaseExperiment):
    """An estimator check called as check(family, grid, **params), optionally behind the refinement gate."""

    needs_grid = True
    check: ClassVar[Callable[..., ConstantReport]]
    renamed: ClassVar[dict[str, str]] = {"times": "t_grid"}

    def validate_point(self, config: ExperimentConfig, point: dict[str, Any]) -> BaseModel:
        family_overrides, params = split_point(point)
        build_family(config, family_overrides)
        validated = super().validate_point(config, params)
        return validated

    def check_kwargs(self, params: BaseModel) -> dict[str, Any]:
        values = params.model_dump()
        return {self.renamed.get(key, key): value for key, value in values.items()}

    def run_point(self, config: ExperimentConfig, params: BaseModel, point: dict[str, Any] | None = None) -> PointResult:
        point = point or {}
        family_overrides, _ = split_point(point)
        family = build_family(config, family_overrides)
        grid = self.make_grid(config)
        kwargs = self.check_kwargs(params)
        check = type(self).check
        if config.tolerances.refine:
            report = refinement_gate(check, family, grid, config.tolerances.stability_factor, **kwargs)
        else:
            report = check(family, grid, **kwargs)
        return _report_rows(point, [report])


class DispersiveExperiment(FamilyCheckExperiment):
    experiment_id = "dispersive"
    reference = "lemma: linear dispersive estimates"
    statement = "dispersive decay of frequency-localized half waves, (1 + 2^k t)^-1 2^{3k} ||P_k f||_1"
    operation = "estimator.check_dispersive"
    params_model = DispersiveParams
    check = staticmethod(check_dispersive)


class StrichartzExperiment(FamilyCheckExperiment):
    experiment_id = "strichartz"
    reference = "lemma: linear Strichartz estimates I"
    statement = "frequency-localized Strichartz estimates, with the logarithmic loss at the endpoint (2, inf)"
    operation = "estimator.check_strichartz"
    params_model = StrichartzParams
    check = staticmethod(check_strichartz)


class StrichartzInverseExperiment(FamilyCheckExperiment):
    experiment_id = "strichartz-inverse-gradient"
    reference = "lemma: linear Strichartz estimate II"
    statement = "||P_k |D|^-1 e^{is|D|} f||_{L^2 L^inf} <= C ln(e + 2^k t) ||P_k f||_2, including k = -1"
    operation = "estimator.check_strichartz"
    params_model = StrichartzInverseParams
    check = staticmethod(check_strichartz)

    def check_kwargs(self, params: BaseModel) -> dict[str, Any]:
        return {**super().check_kwargs(params), "p": 2.0, "r": np.inf, "endpoint": Endpoint.INVERSE}


class LogEndpointExperiment(FamilyCheckExperiment):
    """
    The (2, inf) endpoint over two horizons: the ratio against 2^k ||P_k f||_2 may grow,
    the ratio against 2^k ln^{1/2}(1 + 2^k t) ||P_k f||_2 must not.
    """

    experiment_id = "strichartz-log-endpoint"
    reference = "lemma: linear Strichartz estimates I, endpoint (2, inf)"
    statement = "the L^2 L^inf endpoint loses exactly ln^{1/2}(1 + 2^k t): growth with t, bounded after the log"
    operation = "estimator.check_strichartz"
    params_model = LogEndpointParams

    def run_point(self, config: ExperimentConfig, params: LogEndpointParams, point: dict[str, Any] | None = None) -> PointResult:
        point = point or {}
        family_overrides, _ = split_point(point)
        family = build_family(config, family_overrides)
        grid = self.make_grid(config)
        members = make_family(family, grid)
        reports = [
            check_strichartz(
                members,
                grid,
                params.k,
                2.0,
                np.inf,
                t=horizon,
                endpoint=Endpoint.LOG,
                sign=params.sign,
                homogeneous=params.homogeneous,
            )
            for horizon in (params.t_short, params.t_long)
        ]
        result = _report_rows(point, reports)
        short, long = reports
        if all(report.valid and "plain_sup" in report.extras for report in reports) and short.sup_ratio:
            result.summary["log_growth"] = long.sup_ratio / short.sup_ratio
            result.summary["plain_growth"] = long.extras["plain_sup"] / short.extras["plain_sup"]
        else:
            logger.warning(f"{self.experiment_id}: invalid report at one horizon, no growth ratios")
        return result


class WeightedStrichartzExperiment(FamilyCheckExperiment):
    experiment_id = "weighted-strichartz-1"
    reference = "theorem: weighted Strichartz estimates, item 1"
    statement = "weighted Strichartz estimates, growth (1+s+|x|)^{beta1/p} paid by <x>^{2 beta2/p}, 1/p + 1/r = 1/2"
    operation = "estimator.check_weighted_strichartz"
    params_model = WeightedStrichartzFirstParams
    check = staticmethod(check_weighted_strichartz)


class WeightedStrichartzSecondExperiment(WeightedStrichartzExperiment):
    experiment_id = "weighted-strichartz-2"
    reference = "theorem: weighted Strichartz estimates, item 2"
    statement = "weighted Strichartz estimates for |D|^-1 e^{is|D|}, p in [2, 2 + 2 beta2 - beta1)"
    params_model = WeightedStrichartzSecondParams


class LocalizedExperiment(FamilyCheckExperiment):
    experiment_id = "localized-linfty"
    reference = "corollary: localized L^inf - L^2 estimates"
    statement = "L^inf decay of half waves with physically localized or compactly supported data"
    operation = "estimator.check_localized_linfty"
    params_model = LocalizedParams
    check = staticmethod(check_localized_linfty)


class WeightedL2L2Experiment(FamilyCheckExperiment):
    experiment_id = "weighted-l2l2"
    reference = "corollary: weighted L^2 transport of half waves"
    statement = "weighted L^2 propagation of half waves, (1+t+|x|)^{beta1} against <x>^{beta2}"
    operation = "estimator.check_weighted_l2l2"
    params_model = WeightedL2L2Params
    check = staticmethod(check_weighted_l2l2)


class ShellTransportExperiment(FamilyCheckExperiment):
    experiment_id = "shell-transport"
    reference = "lemma: transport of physical dyadic shells"
    statement = "transport of physical dyadic shells by half waves, 2^{j alpha} ||Q_j P_k e^{it|D|} f||"
    operation = "estimator.check_shell_transport"
    params_model = ShellTransportParams
    check = staticmethod(check_shell_transport)


# -------------------------------------------------------------------------
# Weighted dyadic checks
# -------------------------------------------------------------------------
class WeightedShellExperiment(BaseExperiment):
    """Weighted dyadic checks take the generated fields directly."""

    needs_grid = True
    params_model = WeightedShellParams

    def validate_point(self, config: ExperimentConfig, point: dict[str, Any]) -> BaseModel:
        family_overrides, params = split_point(point)
        build_family(config, family_overrides)
        validated = super().validate_point(config, params)
        if self.experiment_id != "weighted-shell-equivalence" and validated.k is None:
            raise ExperimentError(f"{self.experiment_id} needs k")
        return validated

    def reports(self, fields, params: WeightedShellParams) -> list[ConstantReport]:
        raise NotImplementedError

    def run_point(self, config: ExperimentConfig, params: WeightedShellParams, point: dict[str, Any] | None = None) -> PointResult:
        point = point or {}
        family_overrides, _ = split_point(point)
        grid = self.make_grid(config)
        fields = make_family(build_family(config, family_overrides), grid)
        return _report_rows(point, self.reports(fields, params))


class WeightedShellEquivalenceExperiment(WeightedShellExperiment):
    experiment_id = "weighted-shell-equivalence"
    reference = "lemma: weighted norms through physical dyadic shells"
    statement = "<x>^beta L^2 norms are equivalent to dyadic sums 2^{j beta} ||Q_j P_k f|| for |beta| < 3/2"
    operation = "dyadic.weighted_shell_equivalence_check"

    def reports(self, fields, params: WeightedShellParams) -> list[ConstantReport]:
        return [weighted_shell_equivalence_check(f, params.beta) for f in fields]


class WeightedBernsteinExperiment(WeightedShellExperiment):
    experiment_id = "weighted-bernstein"
    reference = "lemma: weighted Bernstein inequality"
    statement = "Bernstein inequality for homogeneous shells in <x>^beta-weighted L^2"
    operation = "dyadic.weighted_bernstein_check"

    def reports(self, fields, params: WeightedShellParams) -> list[ConstantReport]:
        return [weighted_bernstein_check(fields, params.k, params.beta)]


class WeightedRieszExperiment(WeightedShellExperiment):
    experiment_id = "weighted-riesz"
    reference = "lemma: weighted bounds of Riesz transforms"
    statement = "boundedness of Riesz transforms on frequency shells in <x>^beta-weighted L^2"
    operation = "dyadic.weighted_riesz_check"

    def reports(self, fields, params: WeightedShellParams) -> list[ConstantReport]:
        return [weighted_riesz_check(fields, params.k, params.beta)]


# -------------------------------------------------------------------------
# A_2 weights
# -------------------------------------------------------------------------
class A2Experiment(BaseExperiment):
    experiment_id = "a2-weights"
    reference = "lemma: power weights of class A_2"
    statement = "<x>^alpha is an A_2 weight exactly for alpha in (-3, 3); the characteristic blows up at the ends"
    operation = "estimator.a2_constant"
    params_model = A2Params

    def run_point(self, config: ExperimentConfig, params: A2Params, point: dict[str, Any] | None = None) -> PointResult:
        cube_set = CubeSet(side_exponents=tuple(range(-4, params.max_side_exponent + 1, 2)), rel_tol=params.rel_tol)
        value = a2_constant(params.alpha, cube_set)
        row = {"alpha": params.alpha, "a2_constant": value, "flags": ""}
        summary = {"a2_constant": value}
        if params.reference_alpha is not None:
            summary["growth"] = value / a2_constant(params.reference_alpha, cube_set)
            row["growth"] = summary["growth"]
        return PointResult(rows=[row], summary=summary)
