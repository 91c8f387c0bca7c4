"""
Time sampling and space-time norms of propagated shells.
"""

import logging
from typing import Callable, Sequence

import numpy as np

from app.fields import ScalarField, SpectralField, forward_transform, inverse_transform, lattice_lp

logger = logging.getLogger(__name__)

SAMPLES_PER_LOG_TIME = 64


def time_samples(k: int, t0: float, t: float, refinement: int = 1) -> np.ndarray:
    """Uniform samples of [t0, t]: 64 per unit of ln(1 + 2^k (t - t0)), times the refinement factor."""
    if t < t0:
        raise ValueError(f"time window [{t0}, {t}] is empty")
    count = int(np.ceil(SAMPLES_PER_LOG_TIME * (1.0 + np.log1p(2.0 ** k * (t - t0))))) * refinement
    return np.linspace(t0, t, max(count, 2))


class ShellEvolution:
    """
    exp(sign * i s |D|) applied to a fixed spectrum, optionally premultiplied by a symbol.

    The transform of the data is computed once; each time costs one inverse transform.
    """

    def __init__(self, field: ScalarField, symbol: np.ndarray | None = None, sign: int = 1):
        self.grid = field.grid
        self.sign = sign
        coefficients = forward_transform(field).coefficients
        self._spectrum = coefficients if symbol is None else symbol * coefficients
        self._rho = self.grid.frequency_magnitude

    def at(self, s: float) -> ScalarField:
        phase = np.exp(1j * self.sign * s * self._rho)
        return inverse_transform(SpectralField(self.grid, phase * self._spectrum))

    def initial(self) -> ScalarField:
        return inverse_transform(SpectralField(self.grid, self._spectrum))


def lp_in_time(values: Sequence[float], times: Sequence[float], p: float) -> float:
    """(int |g(s)|^p ds)^(1/p) by the trapezoid rule; max for p = inf."""
    values = np.asarray(values, dtype=float)
    if np.isinf(p):
        return float(values.max()) if values.size else 0.0
    peak = values.max() if values.size else 0.0
    if peak == 0:
        return 0.0
    return float(peak * np.trapezoid((values / peak) ** p, np.asarray(times)) ** (1.0 / p))


def spacetime_norm(
    evolution: ShellEvolution,
    times: np.ndarray,
    p: float,
    r: float,
    weight: Callable[[float, np.ndarray], np.ndarray] | None = None,
) -> float:
    """||w(s, x) u(s)||_{L^p_s L^r_x} over the sampled times."""
    grid = evolution.grid
    per_time = []
    for s in times:
        values = np.abs(evolution.at(s).samples)
        if weight is not None:
            values = values * weight(s, grid.radius)
        per_time.append(lattice_lp(values, r, grid.cell_volume))
    return lp_in_time(per_time, times, p)
