"""
System Experiments
------------------
Solver runs on the model presets:
 - <preset>-evolution: energy stability, weighted decay and bootstrap diagnostics, one id per preset
 - scattering: distance to the free solution built from the Duhamel accumulators
 - linear-limit: cubic order of the deviation from the linear flow
 - lifespan: growth-based lifespan proxy over a descending amplitude grid
"""

import logging
from typing import Any, ClassVar

import numpy as np

from app.experiments.base_experiment import BaseExperiment, PointResult
from app.fields import make_grid
from app.schemas.experiment import (
    ExperimentConfig,
    LifespanParams,
    LinearLimitParams,
    ScatteringParams,
    SystemRunParams,
)
from app.wavesys import (
    DiagnosticParameters,
    InitialData,
    ModelPreset,
    evolve,
    lifespan_table,
    linear_limit_ratio,
    make_initial_data,
    make_preset,
    scattering_profile,
)

logger = logging.getLogger(__name__)

LATE_WINDOW = 10.0


def prepare(config: ExperimentConfig, params: SystemRunParams, epsilon: float) -> tuple[ModelPreset, InitialData]:
    preset = make_preset(params.preset, params.preset_params)
    grid = make_grid(config.grid.half_length, config.grid.points_per_axis)
    data = make_initial_data(
        grid,
        params.profile,
        epsilon,
        seed=params.data_seed,
        m=preset.spec.m,
        order=params.order,
        mu=params.mu,
        support_radius=params.support_radius,
        width=params.width,
        length=params.length,
    )
    return preset, data


def diagnostic_parameters(params: SystemRunParams) -> DiagnosticParameters:
    if params.delta is None:
        return DiagnosticParameters(order=params.order, mu=params.mu)
    return DiagnosticParameters(order=params.order, mu=params.mu, delta=params.delta)


def late_trend(times: np.ndarray, values: np.ndarray, window: float = LATE_WINDOW) -> float:
    """Relative change per window of a linear fit over the last `window` time units."""
    chosen = times >= times[-1] - window
    if chosen.sum() < 2:
        return 0.0
    slope = np.polyfit(times[chosen], values[chosen], 1)[0]
    level = float(np.mean(np.abs(values[chosen])))
    return float(slope * window / level) if level > 0 else 0.0


def gronwall_constant(log_ratio: np.ndarray, driver: np.ndarray) -> float:
    """Smallest C with log(E(t)^2 / E(0)^2) <= C * driver(t) on the trace."""
    usable = driver > 0
    if not np.any(usable):
        return 0.0
    return float(max(0.0, np.max(log_ratio[usable] / driver[usable])))


class SystemExperiment(BaseExperiment):
    needs_grid = True

    def validate_point(self, config: ExperimentConfig, point: dict[str, Any]):
        params = super().validate_point(config, point)
        make_preset(params.preset, params.preset_params)
        return params


class PresetEvolutionExperiment(SystemExperiment):
    """Small-data evolution of one model preset; a `preset` key in the config must name that preset."""

    preset_name: ClassVar[str]
    operation = "wavesys.evolve"
    params_model = SystemRunParams

    def validate_point(self, config: ExperimentConfig, point: dict[str, Any]):
        if point.get("preset", self.preset_name) != self.preset_name:
            raise ValueError(f"{self.experiment_id} runs the {self.preset_name} preset, got preset = {point['preset']!r}")
        return super().validate_point(config, {**point, "preset": self.preset_name})

    def run_point(self, config: ExperimentConfig, params: SystemRunParams, point: dict[str, Any] | None = None) -> PointResult:
        preset, data = prepare(config, params, params.epsilon)
        trace = evolve(
            preset.spec,
            data.state(),
            params.T,
            params.cadence,
            dt=params.dt,
            params=diagnostic_parameters(params),
            scattering=False,
        )
        frame = trace.to_frame()
        flags = ";".join(trace.flags)
        rows = [{"preset": preset.name, "epsilon": params.epsilon, **row, "flags": flags} for row in frame.to_dict("records")]
        energy = frame["energy"].to_numpy()
        times = frame["t"].to_numpy()
        summary = {
            "energy_initial": float(energy[0]),
            "energy_sup_ratio": float(energy.max() / energy[0]) if energy[0] > 0 else 0.0,
            "weighted_sup_max": float(frame["weighted_sup"].max()),
            "weighted_sup_late_trend": late_trend(times, frame["weighted_sup"].to_numpy()),
            "gronwall_constant": gronwall_constant(
                frame["log_energy_ratio"].to_numpy(), frame["gronwall_driver"].to_numpy()
            ),
            "validity_window": trace.validity_window,
            "dt": trace.dt,
        }
        return PointResult(rows=rows, summary=summary)


class RelativisticMembraneEvolution(PresetEvolutionExperiment):
    experiment_id = "relativistic-membrane-evolution"
    reference = "model: relativistic membrane, small-data energy and decay"
    statement = "timelike extremal surfaces: small graphs keep ||du||_{H^N} <= C eps and decay like (1+t)^{mu-}"
    preset_name = "relativistic-membrane"


class NonlinearMembraneEvolution(PresetEvolutionExperiment):
    experiment_id = "nonlinear-membrane-evolution"
    reference = "model: nonlinear membrane, small-data energy and decay"
    statement = "nonlinear membrane equation with cubic quasilinear terms: small-data energy stability and decay"
    preset_name = "nonlinear-membrane"


class MaxwellScalarEvolution(PresetEvolutionExperiment):
    experiment_id = "maxwell-scalar-evolution"
    reference = "model: scalar Born-Infeld type equation, small-data energy and decay"
    statement = "-(1 + (d_t u)^2) d_t^2 u + Delta u = 0: small-data energy stability and decay"
    preset_name = "maxwell-scalar"


class LiquidCrystalEvolution(PresetEvolutionExperiment):
    experiment_id = "liquid-crystal-evolution"
    reference = "model: liquid crystal, small-data energy and decay"
    statement = "liquid-crystal wave equation with coefficient 2 alpha (beta - alpha): small-data energy stability and decay"
    preset_name = "liquid-crystal"


class WaveMapsCubicEvolution(PresetEvolutionExperiment):
    experiment_id = "wave-maps-cubic-evolution"
    reference = "model: wave maps in normal coordinates, small-data energy and decay"
    statement = "cubic truncation of the wave maps system: small-data energy stability and decay"
    preset_name = "wave-maps-cubic"


class ScatteringExperiment(SystemExperiment):
    experiment_id = "scattering"
    reference = "theorem: scattering to a free solution"
    statement = "small solutions scatter: ||d(u - u_inf)(t)||_{H^{N-1}} decreases to zero"
    operation = "wavesys.scattering_profile"
    params_model = ScatteringParams

    def run_point(self, config: ExperimentConfig, params: ScatteringParams, point: dict[str, Any] | None = None) -> PointResult:
        preset, data = prepare(config, params, params.epsilon)
        trace = evolve(
            preset.spec,
            data.state(),
            params.T,
            params.cadence,
            dt=params.dt,
            params=diagnostic_parameters(params),
            scattering=True,
        )
        profile = scattering_profile(trace)
        flags = ";".join(trace.flags)
        rows = [
            {"preset": preset.name, "epsilon": params.epsilon, "t": float(t), "metric": float(m), "flags": flags}
            for t, m in zip(profile.times, profile.metric)
        ]
        after = profile.times >= params.transient
        start = float(profile.metric[after][0]) if np.any(after) else float("nan")
        # the truncated metric vanishes at T; the last trace time before T carries the trend
        late = float(profile.metric[-2]) if len(profile.metric) > 1 else 0.0
        summary = {
            "metric_at_transient": start,
            "metric_before_horizon": late,
            "late_over_transient": late / start if start > 0 else (0.0 if start == 0 else None),
            "nonincreasing_after_transient": float(profile.nonincreasing_after(params.transient)),
        }
        return PointResult(rows=rows, summary=summary)


class LinearLimitExperiment(SystemExperiment):
    experiment_id = "linear-limit"
    reference = "nonlinearity: cubic order of the deviation from the linear flow"
    statement = "cubic nonlinearity: ||u_eps - eps u_lin||_{L^2} shrinks by 8 when eps is halved"
    operation = "wavesys.linear_limit_ratio"
    params_model = LinearLimitParams

    def run_point(self, config: ExperimentConfig, params: LinearLimitParams, point: dict[str, Any] | None = None) -> PointResult:
        preset, unit = prepare(config, params, 1.0)
        ratio, at_eps, at_half = linear_limit_ratio(
            preset.spec, unit.u0, unit.u1, params.T, params.epsilon, cadence=params.cadence
        )
        row = {
            "preset": preset.name,
            "epsilon": params.epsilon,
            "t": params.T,
            "distance": at_eps,
            "distance_half": at_half,
            "ratio": ratio,
            "flags": "",
        }
        return PointResult(rows=[row], summary={"ratio": ratio})


class LifespanExperiment(SystemExperiment):
    experiment_id = "lifespan"
    reference = "theorem: almost global existence"
    statement = "almost global existence: the lifespan proxy does not shrink as the data amplitude decreases"
    operation = "wavesys.lifespan_table"
    params_model = LifespanParams

    def run_point(self, config: ExperimentConfig, params: LifespanParams, point: dict[str, Any] | None = None) -> PointResult:
        preset, unit = prepare(config, params, 1.0)
        table = lifespan_table(
            preset.spec,
            unit.u0,
            unit.u1,
            params.epsilons,
            params.T,
            params.cadence,
            blowup_threshold=params.blowup_threshold,
            params=diagnostic_parameters(params),
        )
        rows = [
            {
                "preset": preset.name,
                "epsilon": entry.epsilon,
                "t_proxy": entry.t_proxy,
                "capped": entry.capped,
                "reason": entry.reason,
                "flags": "",
            }
            for entry in table
        ]
        proxies = [entry.t_proxy for entry in table]
        monotone = all(later >= earlier for earlier, later in zip(proxies, proxies[1:]))
        return PointResult(
            rows=rows,
            summary={
                "monotone": float(monotone),
                "capped": sum(entry.capped for entry in table),
                "uncapped": sum(not entry.capped for entry in table),
            },
        )
