"""
Propagator Experiments
----------------------
 - huygens: the free solution of compactly supported data vanishes off the expanding annulus
 - kirchhoff: spherical-mean evaluation against the spectral solution at random points
"""

import logging
from typing import Any

import numpy as np

from app.estimator import make_family
from app.experiments.base_experiment import BaseExperiment, ExperimentError, PointResult
from app.experiments.estimator_experiments import build_family, split_point
from app.fields import Grid3, ScalarField
from app.propagators import free_wave, huygens_residual, kirchhoff_point_eval, trigonometric_point_value
from app.schemas.experiment import ExperimentConfig, HuygensParams, KirchhoffParams
from app.schemas.family import FamilyProfile

logger = logging.getLogger(__name__)


def bump_pairs(config: ExperimentConfig, point: dict[str, Any], grid: Grid3) -> list[tuple[ScalarField, ScalarField]]:
    """(u0, u1) pairs from consecutive members of a compact-bump family."""
    family_overrides, _ = split_point(point)
    family = build_family(config, family_overrides)
    if family.profile != FamilyProfile.GAUSSIAN_BUMP:
        raise ExperimentError(f"propagator experiments need gaussian-bump data, got {family.profile.value}")
    members = make_family(family, grid)
    return [(members[i], members[(i + 1) % len(members)]) for i in range(len(members))]


class PropagatorExperiment(BaseExperiment):
    needs_grid = True

    def validate_point(self, config: ExperimentConfig, point: dict[str, Any]):
        family_overrides, params = split_point(point)
        build_family(config, family_overrides)
        return super().validate_point(config, params)


class HuygensExperiment(PropagatorExperiment):
    experiment_id = "huygens"
    reference = "principle: strong Huygens principle in three dimensions"
    statement = "strong Huygens principle: data in B(0, R) propagate into the annulus ct - R <= |x| <= ct + R"
    operation = "propagators.huygens_residual"
    params_model = HuygensParams

    def run_point(self, config: ExperimentConfig, params: HuygensParams, point: dict[str, Any] | None = None) -> PointResult:
        point = point or {}
        grid = self.make_grid(config)
        rows = []
        for index, (u0, u1) in enumerate(bump_pairs(config, point, grid)):
            residual = huygens_residual(u0, u1, params.t, params.c, params.margin)
            rows.append({"member": index, "t": params.t, "c": params.c, "residual": residual, "flags": ""})
        return PointResult(rows=rows, summary={"max_residual": max(row["residual"] for row in rows)})


class KirchhoffExperiment(PropagatorExperiment):
    experiment_id = "kirchhoff"
    reference = "formula: Kirchhoff representation of the free wave"
    statement = "Kirchhoff spherical-mean formula agrees with the spectral solution of the free wave equation"
    operation = "propagators.kirchhoff_point_eval"
    params_model = KirchhoffParams

    def run_point(self, config: ExperimentConfig, params: KirchhoffParams, point: dict[str, Any] | None = None) -> PointResult:
        point = point or {}
        grid = self.make_grid(config)
        u0, u1 = bump_pairs(config, point, grid)[0]
        solution, _ = free_wave(u0, u1, params.t, params.c)
        scale = float(np.max(np.abs(solution.samples)))
        rng = np.random.default_rng(config.seed)
        rows = []
        for index in range(params.points):
            direction = rng.normal(size=3)
            x = direction / np.linalg.norm(direction) * params.spread * rng.uniform() ** (1.0 / 3.0)
            kirchhoff = kirchhoff_point_eval(u0, u1, params.t, params.c, x)
            spectral = float(np.real(trigonometric_point_value(solution, x)))
            error = abs(kirchhoff - spectral) / scale if scale > 0 else 0.0
            rows.append(
                {
                    "point": index,
                    "x": float(x[0]),
                    "y": float(x[1]),
                    "z": float(x[2]),
                    "kirchhoff": kirchhoff,
                    "spectral": spectral,
                    "relative_error": error,
                    "flags": "",
                }
            )
        return PointResult(rows=rows, summary={"max_relative_error": max(row["relative_error"] for row in rows)})
