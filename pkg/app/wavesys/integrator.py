"""
Time Integration
----------------
Integrating-factor (Lawson) RK4 for y = (u, v):
 - the free flow E(tau) of box_c u = 0 is applied exactly on the spectrum
 - the nonlinearity N(y) = (0, G(y) + F(t)) enters through the classical four stages
 - the stage forcings are returned so Duhamel integrals can reuse them
"""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from app.core.config import settings
from app.fields import ScalarField
from app.wavesys.nonlinearity import check_aliasing, nonlinearity_spectrum
from app.wavesys.spectral import SpectralWorkspace, fft, ifft_real
from app.wavesys.system import State, SystemSpec

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

Forcing = Callable[[float], Sequence[ScalarField]]


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class CFLError(ValueError):
    """Raised when |dt| exceeds CFL * h / c_max."""
    pass


def max_time_step(spec: SystemSpec, grid) -> float:
    return settings.CFL * grid.spacing / spec.max_speed


def check_cfl(spec: SystemSpec, grid, dt: float) -> None:
    limit = max_time_step(spec, grid)
    if not np.isfinite(dt) or dt == 0:
        raise CFLError(f"time step must be finite and nonzero, got {dt}")
    if abs(dt) > limit * (1 + 1e-12):
        raise CFLError(f"|dt| = {abs(dt):.4g} exceeds CFL limit {limit:.4g} (CFL={settings.CFL}, h={grid.spacing:.4g})")


# -------------------------------------------------------------------------
# Free flow
# -------------------------------------------------------------------------
class FreeFlow:
    """Exact propagator of (u, v) for box_c u = 0, cached per time increment."""

    def __init__(self, speeds: tuple[float, ...], workspace: SpectralWorkspace):
        self.workspace = workspace
        self._omega = np.asarray(speeds, dtype=float).reshape(-1, 1, 1, 1) * workspace.rho
        self._cache: dict[float, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def _factors(self, tau: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if tau not in self._cache:
            omega = self._omega
            phase = omega * tau
            cos = np.cos(phase)
            with np.errstate(divide="ignore", invalid="ignore"):
                sinc = np.where(omega > 0, np.sin(phase) / np.where(omega > 0, omega, 1.0), tau)
            self._cache[tau] = (cos, sinc, -omega * np.sin(phase))
            if len(self._cache) > 8:
                self._cache.pop(next(iter(self._cache)))
        return self._cache[tau]

    def apply(self, tau: float, u_hat: np.ndarray, v_hat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cos, sinc, msin = self._factors(tau)
        return cos * u_hat + sinc * v_hat, msin * u_hat + cos * v_hat

    def apply_velocity(self, tau: float, g_hat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """E(tau) applied to (0, g)."""
        cos, sinc, _ = self._factors(tau)
        return sinc * g_hat, cos * g_hat


# -------------------------------------------------------------------------
# Stepper
# -------------------------------------------------------------------------
@dataclass
class StepResult:
    u_hat: np.ndarray
    v_hat: np.ndarray
    stage_times: tuple[float, float, float, float]
    stage_forcing: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


class Stepper:
    """
    Advance stacked spectra by one Lawson RK4 step.

    The nonlinear stage values are raw FFT spectra of G (+ F), dealiased.
    """

    def __init__(self, spec: SystemSpec, grid, forcing: Forcing | None = None):
        self.spec = spec
        self.grid = grid
        self.workspace = SpectralWorkspace(grid)
        self.flow = FreeFlow(spec.speeds, self.workspace)
        self.forcing = forcing

    def _rhs(self, t: float, u_hat: np.ndarray, v_hat: np.ndarray) -> np.ndarray:
        g_hat = nonlinearity_spectrum(self.spec, self.workspace, u_hat, v_hat)
        if self.forcing is not None:
            extra = np.stack([np.real(f.samples) for f in self.forcing(t)])
            g_hat = g_hat + fft(extra) * self.workspace.mask
        return g_hat

    def advance(self, t: float, u_hat: np.ndarray, v_hat: np.ndarray, dt: float) -> StepResult:
        check_cfl(self.spec, self.grid, dt)
        check_aliasing(self.workspace, u_hat, v_hat)
        half = 0.5 * dt
        flow = self.flow

        k1 = self._rhs(t, u_hat, v_hat)
        a_u, a_v = flow.apply(half, u_hat, v_hat + half * k1)
        k2 = self._rhs(t + half, a_u, a_v)
        hu, hv = flow.apply(half, u_hat, v_hat)
        k3 = self._rhs(t + half, hu, hv + half * k2)
        fu, fv = flow.apply(dt, u_hat, v_hat)
        s3u, s3v = flow.apply_velocity(half, k3)
        k4 = self._rhs(t + dt, fu + dt * s3u, fv + dt * s3v)

        e1u, e1v = flow.apply_velocity(dt, k1)
        e23u, e23v = flow.apply_velocity(half, k2 + k3)
        new_u = fu + dt / 6.0 * (e1u + 2.0 * e23u)
        new_v = fv + dt / 6.0 * (e1v + 2.0 * e23v + k4)
        return StepResult(
            u_hat=new_u,
            v_hat=new_v,
            stage_times=(t, t + half, t + half, t + dt),
            stage_forcing=(k1, k2, k3, k4),
        )


def step(
    spec: SystemSpec,
    state: State,
    dt: float,
    forcing: Forcing | None = None,
) -> State:
    """
    One integrating-factor RK4 step of box_c u = G(u, du, d^2u) + F(t).

    Args:
        spec: system coefficients
        state: current (u, v)
        dt: time increment, negative to step backwards
        forcing: optional callable t -> per-component ScalarField added to G

    Raises:
        CFLError: |dt| above the CFL limit
        AliasingError: state carries mass outside the dealiasing ball
        FixedPointError: acceleration iteration failure
    """
    if state.m != spec.m:
        raise ValueError(f"state has {state.m} components, system has {spec.m}")
    stepper = Stepper(spec, state.grid, forcing)
    result = stepper.advance(state.t, fft(state.u_array()), fft(state.v_array()), dt)
    return State.from_arrays(
        state.grid,
        state.t + dt,
        ifft_real(result.u_hat),
        ifft_real(result.v_hat),
    )
