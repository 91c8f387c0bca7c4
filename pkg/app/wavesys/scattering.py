"""
Scattering data from the Duhamel accumulators recorded by evolve.

With E(t) the free flow and J(t) = int_0^t E(-s)(0, G(s)) ds, the solution is
w(t) = E(t)[w(0) + J(t)], the free solution with data w(0) + J(T) approximates the scattering
state, and ||E(t)X||_energy = ||X||_energy turns the distance to it into ||J(T) - J(t)||.
"""

import logging
from dataclasses import dataclass

import numpy as np

from app.fields import ScalarField
from app.wavesys.diagnostics import DiagnosticsTrace
from app.wavesys.integrator import FreeFlow
from app.wavesys.spectral import SpectralWorkspace, fft, ifft_real

logger = logging.getLogger(__name__)


class ScatteringError(ValueError):
    """Raised when a trace carries no Duhamel snapshots."""
    pass


@dataclass
class ScatteringProfile:
    u0: tuple[ScalarField, ...]
    u1: tuple[ScalarField, ...]
    times: np.ndarray
    metric: np.ndarray

    def nonincreasing_after(self, t_start: float, rtol: float = 1e-6) -> bool:
        tail = self.metric[self.times >= t_start]
        return bool(np.all(np.diff(tail) <= rtol * max(float(np.max(tail, initial=0.0)), 1e-300)))


def _unpack(workspace: SpectralWorkspace, packed: np.ndarray, m: int) -> np.ndarray:
    full = np.zeros((m,) + workspace.grid.shape, dtype=complex)
    full[..., workspace.mask] = packed
    return full


def scattering_profile(trace: DiagnosticsTrace, order: int | None = None) -> ScatteringProfile:
    """
    Free data (u0_inf, u1_inf) at the initial time and the metric
    ||d(u - u_inf)(t)||_{H^{N-1}} at every trace time.

    Raises:
        ScatteringError: the evolution ran without scattering accumulators
    """
    if not trace.has_scattering or trace.initial_state is None:
        raise ScatteringError("trace has no Duhamel snapshots; run evolve with scattering=True")
    state = trace.initial_state
    grid = state.grid
    m = state.m
    order = trace.parameters.order if order is None else order
    workspace = SpectralWorkspace(grid)
    speeds = np.asarray(trace.speeds)

    final = trace.snapshots[-1]
    final_u = _unpack(workspace, final.u_part, m)
    final_v = _unpack(workspace, final.v_part, m)
    u0 = state.u_array() + ifft_real(final_u)
    u1 = state.v_array() + ifft_real(final_v)

    metric = []
    for snapshot in trace.snapshots:
        du = final_u - _unpack(workspace, snapshot.u_part, m)
        dv = final_v - _unpack(workspace, snapshot.v_part, m)
        metric.append(np.sqrt(workspace.energy_squared(du, dv, speeds, order - 1)))
    times = np.array([s.t for s in trace.snapshots])
    logger.debug(f"Scattering metric from {len(times)} snapshots, final value {metric[-1]:.3g}")
    return ScatteringProfile(
        u0=tuple(ScalarField(grid, x) for x in u0),
        u1=tuple(ScalarField(grid, x) for x in u1),
        times=times,
        metric=np.asarray(metric),
    )


def free_data_residual(trace: DiagnosticsTrace, profile: ScatteringProfile) -> float:
    """Energy distance between the final state and the free evolution of the scattering data at T."""
    final = trace.final_state
    workspace = SpectralWorkspace(final.grid)
    flow = FreeFlow(trace.speeds, workspace)
    elapsed = final.t - trace.initial_state.t
    u_hat, v_hat = flow.apply(
        elapsed,
        fft(np.stack([f.samples for f in profile.u0]).real),
        fft(np.stack([f.samples for f in profile.u1]).real),
    )
    du = fft(final.u_array()) - u_hat
    dv = fft(final.v_array()) - v_hat
    return float(np.sqrt(workspace.energy_squared(du, dv, trace.speeds, trace.parameters.order - 1)))
