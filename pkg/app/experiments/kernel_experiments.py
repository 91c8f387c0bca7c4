"""
Kernel Experiments
------------------
 - kernel-sweep: |K| against its regime envelope over a (t, r) grid
 - kernel-slope: log-log decay slope on the light cone or in the core
 - low-frequency-kernel, low-frequency-log-kernel: time decay of the low-frequency lumps,
   with the sup ratio recomputed at half the quadrature tolerance
"""

import logging

import numpy as np

from app.core.config import settings
from app.experiments.base_experiment import BaseExperiment, PointResult
from app.kernels import InsufficientSamplesError, Regime, RegimeMixError, decay_slope_fit, eval_kernel, regime_bound
from app.schemas.experiment import (
    ExperimentConfig,
    KernelParams,
    KernelSlopeParams,
    LowFrequencyKernelParams,
    LowFrequencyLogKernelParams,
)
from app.schemas.kernel import KernelSpec
from app.schemas.report import FLAG_QUADRATURE

logger = logging.getLogger(__name__)

KERNEL_COLUMNS = ("k", "iota", "M", "t", "r", "regime", "abs_value", "envelope", "ratio", "quad_err")
RADIUS_FACTORS = {"light-cone": 1.0, "core": 0.25}


def kernel_rows(spec: KernelSpec, params: KernelParams, tol: float, regime: Regime | None = None) -> list[dict]:
    """One row per (t, r = factor * max(t, 1)); the envelope follows the sample regime unless one is forced."""
    rows = []
    for t in params.times:
        for factor in params.radius_factors:
            r = factor * max(t, 1.0)
            sample = eval_kernel(spec, t, r, tol)
            chosen = sample.regime if regime is None else regime
            envelope = regime_bound(spec, t, r, regime=chosen)
            value = abs(sample.value)
            rows.append(
                {
                    "k": spec.k,
                    "iota": spec.iota,
                    "M": spec.M,
                    "t": t,
                    "r": r,
                    "regime": Regime(chosen).value,
                    "abs_value": value,
                    "envelope": envelope,
                    "ratio": value / envelope if envelope > 0 else np.inf,
                    "quad_err": sample.quadrature_error,
                    "flags": FLAG_QUADRATURE if sample.flagged else "",
                }
            )
    return rows


def sup_valid_ratio(rows: list[dict]) -> float | None:
    valid = [row["ratio"] for row in rows if not row["flags"]]
    return max(valid) if valid else None


class KernelSweepExperiment(BaseExperiment):
    experiment_id = "kernel-sweep"
    reference = "lemma: pointwise bounds of frequency-localized wave kernels"
    statement = "frequency-localized wave kernels obey their regime envelopes (static, core, light cone, exterior)"
    operation = "kernels.eval_kernel"
    params_model = KernelParams
    columns = KERNEL_COLUMNS

    def run_point(self, config: ExperimentConfig, params: KernelParams, point: dict | None = None) -> PointResult:
        rows = kernel_rows(params.kernel_spec(), params, config.tolerances.kernel_tolerance)
        return PointResult(rows=rows, summary={"sup_ratio": sup_valid_ratio(rows)})


class KernelSlopeExperiment(BaseExperiment):
    experiment_id = "kernel-slope"
    reference = "lemma: pointwise bounds of frequency-localized wave kernels (decay rates)"
    statement = "stationary-phase decay rates of the unit-frequency kernel: t^-1 on the light cone, fast decay in the core"
    operation = "kernels.decay_slope_fit"
    params_model = KernelSlopeParams

    def run_point(self, config: ExperimentConfig, params: KernelSlopeParams, point: dict | None = None) -> PointResult:
        spec = params.kernel_spec()
        tol = config.tolerances.kernel_tolerance
        t_lo, t_hi = params.window
        factor = RADIUS_FACTORS[params.regime]
        samples = [eval_kernel(spec, t, factor * t, tol) for t in np.geomspace(t_lo, t_hi, params.count)]
        usable = [s for s in samples if not s.flagged]
        row = {"k": spec.k, "iota": spec.iota, "M": spec.M, "regime": params.regime, "samples": len(usable)}
        try:
            slope, intercept, residual = decay_slope_fit(usable, params.window)
            row.update(slope=slope, intercept=intercept, residual=residual, flags="")
        except (InsufficientSamplesError, RegimeMixError) as e:
            logger.warning(f"Slope fit for k={spec.k} {params.regime} failed: {e}")
            row.update(slope=None, intercept=None, residual=None, flags=FLAG_QUADRATURE)
        # per-regime keys so one config can gate the cone and the core separately
        key = "cone_slope" if params.regime == "light-cone" else "core_slope"
        return PointResult(rows=[row], summary={"slope": row["slope"], key: row["slope"]})


class LowFrequencyKernelExperiment(BaseExperiment):
    experiment_id = "low-frequency-kernel"
    reference = "lemma: decay of the low-frequency kernel K_-1"
    statement = "the low-frequency lump kernel decays like (1+t)^-1 uniformly in x, for iota = 0, 1"
    operation = "kernels.eval_kernel"
    params_model = LowFrequencyKernelParams
    columns = KERNEL_COLUMNS

    def run_point(self, config: ExperimentConfig, params: KernelParams, point: dict | None = None) -> PointResult:
        spec = params.kernel_spec()
        tol = config.tolerances.kernel_tolerance or settings.KERNEL_TOLERANCE
        rows = kernel_rows(spec, params, tol, Regime.UNIFORM)
        sup = sup_valid_ratio(rows)
        halved = sup_valid_ratio(kernel_rows(spec, params, tol / 2, Regime.UNIFORM))
        if sup is None or halved is None:
            change = None
        else:
            change = abs(halved - sup) / max(abs(sup), abs(halved), 1e-300)
        logger.info(f"{self.experiment_id} iota={spec.iota}: sup ratio {sup}, change at half tolerance {change}")
        return PointResult(rows=rows, summary={"sup_ratio": sup, "halving_change": change})


class LowFrequencyLogKernelExperiment(LowFrequencyKernelExperiment):
    experiment_id = "low-frequency-log-kernel"
    reference = "lemma: decay of the low-frequency kernel T_-1"
    statement = "the low-frequency lump with |D|^-2 decays like (1+t)^-1 ln(e+t) uniformly in x"
    params_model = LowFrequencyLogKernelParams
