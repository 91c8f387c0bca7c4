"""
Evolution Diagnostics
---------------------
evolve advances a system with the integrating-factor stepper and records, at a fixed cadence:
 - the H^N energy norm ||du||_{H^N} and its running supremum
 - the weighted decay norm (1+t)^{0.9 mu}(||u||_inf + ||du||_inf)
 - Strichartz-type accumulators over dyadic shells (trapezoid in time)
 - the bootstrap sums with large Lebesgue exponents
 - the Gronwall driver int ||d^{<=1}u||^2_{B^{1+delta}_{inf,1}} and the log energy ratio
 - Duhamel accumulators used to reconstruct the scattering data
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import pandas as pd

from app.core.config import settings
from app.dyadic import ProjectionKind, frequency_symbol, top_shell
from app.estimator.spacetime import lp_in_time
from app.fields import lattice_lp, measured_support_radius, wraparound_check
from app.schemas.report import FLAG_WRAPAROUND
from app.wavesys.integrator import Forcing, Stepper, max_time_step
from app.wavesys.nonlinearity import FixedPointError
from app.wavesys.spectral import SpectralWorkspace, fft, ifft_real
from app.wavesys.system import State, SystemSpec

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

DEFAULT_ORDER = 4
DEFAULT_MU = 0.5
DECAY_FRACTION = 0.9
BOOTSTRAP_DELTA_RATIO = 1e-6
SUPPORT_THRESHOLD = 1e-8

ACCUMULATORS = ("strichartz_sum", "bootstrap_lp_sum", "bootstrap_mixed_sum", "gronwall_driver")
COLUMNS = (
    "t",
    "energy",
    "energy_sup",
    "weighted_sup",
    "strichartz_sum",
    "log_strichartz_sum",
    "bootstrap_lp_sum",
    "bootstrap_mixed_sum",
    "gronwall_driver",
    "log_energy_ratio",
)


@dataclass(frozen=True)
class DiagnosticParameters:
    """Exponents of the monitored norms. delta must lie in (0, 1/3)."""

    order: int = DEFAULT_ORDER
    mu: float = DEFAULT_MU
    delta: float = field(default_factory=lambda: settings.DEFAULT_DELTA)
    bootstrap_delta: float | None = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"Sobolev order must be >= 1, got {self.order}")
        if not 0 < self.mu < 1:
            raise ValueError(f"mu must lie in (0, 1), got {self.mu}")
        if not 0 < self.delta < 1.0 / 3.0:
            raise ValueError(f"delta must lie in (0, 1/3), got {self.delta}")
        if self.bootstrap_delta is None:
            object.__setattr__(self, "bootstrap_delta", BOOTSTRAP_DELTA_RATIO * self.mu)

    @property
    def decay_exponent(self) -> float:
        return DECAY_FRACTION * self.mu


@dataclass
class ScatteringSnapshot:
    """J(t) restricted to the dealiasing ball, stored in single precision."""

    t: float
    u_part: np.ndarray
    v_part: np.ndarray


@dataclass
class DiagnosticsTrace:
    """Append-only record of one evolution."""

    speeds: tuple[float, ...]
    parameters: DiagnosticParameters
    rows: list[dict] = field(default_factory=list)
    snapshots: list[ScatteringSnapshot] = field(default_factory=list)
    initial_state: State | None = None
    final_state: State | None = None
    flags: list[str] = field(default_factory=list)
    validity_window: float | None = None
    stopped_reason: str | None = None
    dt: float | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([row["t"] for row in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=list(COLUMNS))

    @property
    def has_scattering(self) -> bool:
        return bool(self.snapshots)


# -------------------------------------------------------------------------
# Per-snapshot measurements
# -------------------------------------------------------------------------
class ShellMonitor:
    """Dyadic measurements of d^{<=1} u at trace times, with per-shell time histories."""

    def __init__(self, spec: SystemSpec, workspace: SpectralWorkspace, params: DiagnosticParameters):
        grid = workspace.grid
        self.spec = spec
        self.workspace = workspace
        self.params = params
        self.shells = list(range(-1, top_shell(grid) + 1))
        self.symbols = {k: frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, k) for k in self.shells}
        self.radius = grid.radius
        self.history: dict[str, dict[int, list[float]]] = {
            name: {k: [] for k in self.shells} for name in ("weighted_sup", "plain_sup", "lp", "mixed")
        }
        self.besov: list[float] = []
        self.times: list[float] = []

    def _weight(self, t: float, nu: float) -> np.ndarray:
        return (1.0 + t + self.radius) ** nu

    def record(self, t: float, u_hat: np.ndarray, v_hat: np.ndarray) -> None:
        params = self.params
        delta, small = params.delta, params.bootstrap_delta
        cell = self.workspace.grid.cell_volume
        slots = [u_hat, v_hat] + [d * u_hat for d in self.workspace.derivative_symbols]
        w62 = self._weight(t, params.mu / 2 - 10 * small)
        w63 = self._weight(t, 2.2 * small)
        w64 = self._weight(t, params.mu / 2 - 11 * small)
        r63 = (2 + 8 * small) / (1 - 4 * small)
        r64 = 2 + 1 / (2 * small)
        besov = 0.0
        for k in self.shells:
            pieces = [ifft_real(self.symbols[k] * s) for s in slots]
            full = np.sqrt(sum(np.sum(p ** 2, axis=0) for p in pieces))
            derivative = np.sqrt(sum(np.sum(p ** 2, axis=0) for p in pieces[1:]))
            plain = float(full.max())
            self.history["plain_sup"][k].append(plain)
            self.history["weighted_sup"][k].append(float((w62 * full).max()))
            self.history["lp"][k].append(lattice_lp(w63 * derivative, r63, cell))
            self.history["mixed"][k].append(lattice_lp(w64 * full, r64, cell))
            besov += 2.0 ** ((1 + delta) * k) * plain
        self.besov.append(besov)
        self.times.append(t)

    def sums(self) -> dict[str, float]:
        params = self.params
        delta, small, mu = params.delta, params.bootstrap_delta, params.mu
        times = self.times
        t = times[-1]
        p63 = 1 + 1 / (4 * small)
        p64 = 2 + 8 * small
        strichartz = log_sum = lp_sum = mixed_sum = 0.0
        for k in self.shells:
            strichartz += 2.0 ** ((1 + delta) * k) * lp_in_time(self.history["weighted_sup"][k], times, 2)
            log_sum += 2.0 ** ((1 + delta) * k) * lp_in_time(self.history["plain_sup"][k], times, 2)
            lp_sum += 2.0 ** ((3 + mu - 18.8 * small) * k) * lp_in_time(self.history["lp"][k], times, p63)
            mixed_sum += 2.0 ** ((2 + mu - 18.8 * small) * k) * lp_in_time(self.history["mixed"][k], times, p64)
        driver = float(np.trapezoid(np.square(self.besov), times)) if len(times) > 1 else 0.0
        return {
            "strichartz_sum": strichartz,
            "log_strichartz_sum": log_sum / np.log(np.e + t),
            "bootstrap_lp_sum": lp_sum,
            "bootstrap_mixed_sum": mixed_sum,
            "gronwall_driver": driver,
        }


def _pointwise_sups(workspace: SpectralWorkspace, u_hat: np.ndarray, v_hat: np.ndarray) -> tuple[float, float]:
    u = ifft_real(u_hat)
    v = ifft_real(v_hat)
    grad = workspace.gradient(u_hat)
    derivative = np.sqrt(np.sum(v ** 2, axis=0) + np.sum(grad ** 2, axis=(0, 1)))
    return float(np.sqrt(np.sum(u ** 2, axis=0)).max()), float(derivative.max())


# -------------------------------------------------------------------------
# Validity window
# -------------------------------------------------------------------------
def validity_window(spec: SystemSpec, state: State, margin: float | None = None) -> float:
    """Largest horizon before the (measured or certified) support reaches the periodic images."""
    margin = settings.SHELL_MARGIN if margin is None else margin
    radii = []
    for f in state.u + state.v:
        if f.support_radius is not None:
            radii.append(f.support_radius)
        elif f.max_abs() > 0:
            radii.append(measured_support_radius(f, SUPPORT_THRESHOLD))
    reach = max(radii, default=0.0)
    return max(0.0, (state.grid.half_length - reach - margin) / spec.max_speed)


def _check_window(spec: SystemSpec, state: State, horizon: float) -> tuple[float, list[str]]:
    window = validity_window(spec, state)
    certified = all(f.support_radius is not None for f in state.u + state.v)
    if certified:
        radius = max(f.support_radius for f in state.u + state.v)
        wraparound_check(state.grid, radius, spec.max_speed, horizon)
        return window, []
    if horizon > window:
        logger.warning(f"Horizon {horizon} exceeds the measured validity window {window:.3g}")
        return window, [FLAG_WRAPAROUND]
    return window, []


# -------------------------------------------------------------------------
# Evolution
# -------------------------------------------------------------------------
def evolve(
    spec: SystemSpec,
    state: State,
    T: float,
    cadence: float,
    dt: float | None = None,
    params: DiagnosticParameters | None = None,
    forcing: Forcing | None = None,
    scattering: bool = True,
    stop_growth: float | None = None,
) -> DiagnosticsTrace:
    """
    Advance to time state.t + T and record diagnostics every `cadence`.

    Args:
        spec: system coefficients
        state: initial data
        T: horizon (positive, a multiple of cadence up to rounding)
        cadence: trace spacing
        dt: step size; defaults to the largest CFL step dividing the cadence
        params: norm exponents (order N, mu, delta)
        forcing: optional external forcing F(t)
        scattering: accumulate the Duhamel integrals at trace times
        stop_growth: stop once the energy exceeds this multiple of its initial value

    Raises:
        WraparoundError: certified supports reach the periodic images before T
        CFLError, AliasingError, FixedPointError: propagated from the stepper
    """
    if not (T > 0 and cadence > 0):
        raise ValueError(f"horizon and cadence must be positive, got T={T}, cadence={cadence}")
    if state.m != spec.m:
        raise ValueError(f"state has {state.m} components, system has {spec.m}")
    params = params or DiagnosticParameters()
    grid = state.grid
    n_trace = max(1, int(round(T / cadence)))
    cadence = T / n_trace
    limit = max_time_step(spec, grid) if dt is None else abs(dt)
    substeps = max(1, int(np.ceil(cadence / limit - 1e-12)))
    dt = cadence / substeps

    window, flags = _check_window(spec, state, T)
    stepper = Stepper(spec, grid, forcing)
    workspace = stepper.workspace
    monitor = ShellMonitor(spec, workspace, params)
    trace = DiagnosticsTrace(
        speeds=spec.speeds,
        parameters=params,
        initial_state=state,
        flags=flags,
        validity_window=window,
        dt=dt,
    )
    speeds = np.asarray(spec.speeds)
    u_hat, v_hat = fft(state.u_array()), fft(state.v_array())
    j_u = np.zeros_like(u_hat)
    j_v = np.zeros_like(v_hat)
    t = state.t
    energy_sup = 0.0
    initial_energy = None

    def record(t_now: float) -> float:
        nonlocal energy_sup, initial_energy
        energy = float(np.sqrt(workspace.energy_squared(u_hat, v_hat, speeds, params.order)))
        initial_energy = energy if initial_energy is None else initial_energy
        energy_sup = max(energy_sup, energy)
        u_sup, du_sup = _pointwise_sups(workspace, u_hat, v_hat)
        monitor.record(t_now - state.t, u_hat, v_hat)
        ratio = 0.0 if initial_energy == 0 or energy == 0 else float(np.log(energy ** 2 / initial_energy ** 2))
        row = {
            "t": t_now,
            "energy": energy,
            "energy_sup": energy_sup,
            "weighted_sup": (1.0 + t_now) ** params.decay_exponent * (u_sup + du_sup),
            "log_energy_ratio": ratio,
        }
        row.update(monitor.sums())
        trace.rows.append(row)
        if scattering:
            mask = workspace.mask
            trace.snapshots.append(
                ScatteringSnapshot(t_now, j_u[..., mask].astype(np.complex64), j_v[..., mask].astype(np.complex64))
            )
        return energy

    record(t)
    logger.info(f"Evolving {spec.name} to T={T} with dt={dt:.4g} ({n_trace * substeps} steps)")
    for index in range(n_trace):
        for sub in range(substeps):
            try:
                result = stepper.advance(t, u_hat, v_hat, dt)
            except FixedPointError as e:
                e.t = t
                raise
            if scattering and not spec.is_linear:
                weights = (1.0, 2.0, 2.0, 1.0)
                for weight, s, g_hat in zip(weights, result.stage_times, result.stage_forcing):
                    du, dv = stepper.flow.apply_velocity(-(s - state.t), g_hat)
                    j_u += dt * weight / 6.0 * du
                    j_v += dt * weight / 6.0 * dv
            u_hat, v_hat = result.u_hat, result.v_hat
            t = state.t + (index * substeps + sub + 1) * dt
        energy = record(t)
        if not np.isfinite(energy):
            trace.stopped_reason = "non-finite"
            break
        if stop_growth is not None and initial_energy and energy > stop_growth * initial_energy:
            trace.stopped_reason = "growth"
            logger.info(f"Energy grew past {stop_growth}x its initial value at t={t:.4g}")
            break

    trace.final_state = State.from_arrays(grid, t, ifft_real(u_hat), ifft_real(v_hat))
    return trace


def energy_norm(spec: SystemSpec, state: State, order: int = DEFAULT_ORDER) -> float:
    """||du||_{H^N} with c_i^2 weighting on the gradient."""
    workspace = SpectralWorkspace(state.grid)
    return float(
        np.sqrt(workspace.energy_squared(fft(state.u_array()), fft(state.v_array()), spec.speeds, order))
    )


def accumulators_nondecreasing(trace: DiagnosticsTrace, names: Sequence[str] = ACCUMULATORS) -> bool:
    frame = trace.to_frame()
    return all(bool(np.all(np.diff(frame[name].to_numpy()) >= -1e-12 * max(1.0, frame[name].abs().max()))) for name in names)
