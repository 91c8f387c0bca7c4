"""
Lifespan table and linear-limit ratio.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.fields import ScalarField
from app.wavesys.diagnostics import DiagnosticParameters, evolve
from app.wavesys.nonlinearity import FixedPointError
from app.wavesys.integrator import FreeFlow
from app.wavesys.system import State, SystemSpec
from app.wavesys.spectral import SpectralWorkspace, fft

logger = logging.getLogger(__name__)

DEFAULT_BLOWUP_THRESHOLD = 10.0


@dataclass(frozen=True)
class LifespanEntry:
    epsilon: float
    t_proxy: float
    capped: bool
    reason: str


def _scaled_state(u0: Sequence[ScalarField], u1: Sequence[ScalarField], epsilon: float) -> State:
    return State(
        t=0.0,
        u=tuple(f.with_samples(epsilon * f.samples, f.support_radius) for f in u0),
        v=tuple(f.with_samples(epsilon * f.samples, f.support_radius) for f in u1),
    )


def lifespan_table(
    spec: SystemSpec,
    u0: Sequence[ScalarField],
    u1: Sequence[ScalarField],
    epsilons: Sequence[float],
    horizon: float,
    cadence: float,
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD,
    params: DiagnosticParameters | None = None,
) -> list[LifespanEntry]:
    """
    Time until ||du||_{H^N} exceeds blowup_threshold x its initial value (or the acceleration
    iteration fails) for data epsilon * (u0, u1); entries reaching the horizon are capped.

    Args:
        spec: system coefficients
        u0, u1: unit data
        epsilons: strictly descending amplitudes (>= 0)
        horizon: largest evolution time
        cadence: trace spacing, the resolution of t_proxy
        blowup_threshold: growth factor treated as blow-up
    """
    epsilons = [float(e) for e in epsilons]
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError(f"epsilon grid must be strictly descending, got {epsilons}")
    if any(e < 0 for e in epsilons):
        raise ValueError(f"epsilon grid must be nonnegative, got {epsilons}")
    if blowup_threshold <= 1:
        raise ValueError(f"blowup threshold must exceed 1, got {blowup_threshold}")

    table = []
    for epsilon in epsilons:
        state = _scaled_state(u0, u1, epsilon)
        if epsilon == 0:
            table.append(LifespanEntry(epsilon, horizon, True, "zero-data"))
            continue
        try:
            trace = evolve(
                spec,
                state,
                horizon,
                cadence,
                params=params,
                scattering=False,
                stop_growth=blowup_threshold,
            )
        except FixedPointError as e:
            t_fail = float(getattr(e, "t", 0.0))  # set by evolve
            logger.warning(f"epsilon={epsilon:g}: acceleration iteration failed ({e})")
            table.append(LifespanEntry(epsilon, t_fail, False, "fixed-point"))
            continue
        if trace.stopped_reason in ("growth", "non-finite"):
            table.append(LifespanEntry(epsilon, float(trace.times[-1]), False, trace.stopped_reason))
        else:
            table.append(LifespanEntry(epsilon, horizon, True, "horizon"))
        logger.info(f"epsilon={epsilon:g}: T_proxy={table[-1].t_proxy:.4g} ({table[-1].reason})")
    return table


def linear_limit_ratio(
    spec: SystemSpec,
    u0: Sequence[ScalarField],
    u1: Sequence[ScalarField],
    t: float,
    epsilon: float,
    cadence: float | None = None,
) -> tuple[float, float, float]:
    """
    ||u_eps(t) - eps u_lin(t)||_{L^2} at epsilon and epsilon / 2 and their ratio.

    For a cubic nonlinearity the ratio approaches 8.

    Returns:
        (ratio, distance at epsilon, distance at epsilon / 2)
    """
    if epsilon <= 0 or t <= 0:
        raise ValueError(f"epsilon and t must be positive, got epsilon={epsilon}, t={t}")
    cadence = t if cadence is None else cadence
    grid = u0[0].grid
    workspace = SpectralWorkspace(grid)
    unit = _scaled_state(u0, u1, 1.0)
    free_u, _ = FreeFlow(spec.speeds, workspace).apply(t, fft(unit.u_array()), fft(unit.v_array()))

    distances = []
    for amplitude in (epsilon, epsilon / 2):
        trace = evolve(spec, _scaled_state(u0, u1, amplitude), t, cadence, scattering=False)
        difference = fft(trace.final_state.u_array()) - amplitude * free_u
        distances.append(float(np.sqrt(workspace.l2_squared(difference))))
    ratio = distances[0] / distances[1] if distances[1] > 0 else float("inf")
    logger.info(f"Linear-limit ratio at epsilon={epsilon:g}: {ratio:.4g}")
    return ratio, distances[0], distances[1]
