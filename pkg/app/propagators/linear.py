"""
Linear Wave Propagators
-----------------------
Solution operators of the free wave equation u_tt = c^2 Delta u as Fourier multipliers:
 - half_wave: exp(+/- i c t |xi|)
 - cosine_prop: cos(c t |xi|)
 - sine_prop: sin(c t |xi|) / (c |xi|), equal to t at xi = 0
 - free_wave, wave_energy and the Duhamel formula for a forced equation
"""

import logging
from typing import Callable

import numpy as np

from app.core.config import settings
from app.fields import (
    ScalarField,
    apply_symbol,
    forward_transform,
    inverse_transform,
    radial_symbol,
    wraparound_check,
)
from app.fields.field import SpectralField
from app.fields.grid import Grid3

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

Forcing = Callable[[float], ScalarField]


# -------------------------------------------------------------------------
# Symbols
# -------------------------------------------------------------------------
def _check_speed(c: float) -> None:
    if not c > 0:
        raise ValueError(f"wave speed must be positive, got {c}")


def half_wave_symbol(grid: Grid3, t: float, sign: int = 1, c: float = 1.0) -> np.ndarray:
    return radial_symbol(grid, lambda rho: np.exp(1j * sign * c * t * rho), at_zero=1.0)


def cosine_symbol(grid: Grid3, t: float, c: float = 1.0) -> np.ndarray:
    return radial_symbol(grid, lambda rho: np.cos(c * t * rho), at_zero=1.0)


def sine_symbol(grid: Grid3, t: float, c: float = 1.0) -> np.ndarray:
    return radial_symbol(grid, lambda rho: np.sin(c * t * rho) / (c * rho), at_zero=t)


def _guard_window(field: ScalarField, t: float, c: float) -> None:
    if field.support_radius is not None:
        wraparound_check(field.grid, field.support_radius, c, t, settings.SHELL_MARGIN)


def _grown_support(field: ScalarField, t: float, c: float) -> float | None:
    if field.support_radius is None:
        return None
    return field.support_radius + c * abs(t)


# -------------------------------------------------------------------------
# Propagators
# -------------------------------------------------------------------------
def half_wave(field: ScalarField, t: float, sign: int = 1, c: float = 1.0) -> ScalarField:
    """
    exp(sign * i c t |D|) f.

    Raises:
        WraparoundError: if the field carries a support radius and the propagated support
            would reach the periodic images
    """
    _check_speed(c)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    _guard_window(field, t, c)
    return apply_symbol(field, half_wave_symbol(field.grid, t, sign, c))


def cosine_prop(field: ScalarField, t: float, c: float = 1.0) -> ScalarField:
    _check_speed(c)
    _guard_window(field, t, c)
    out = apply_symbol(field, cosine_symbol(field.grid, t, c))
    return out.with_samples(out.samples, _grown_support(field, t, c))


def sine_prop(field: ScalarField, t: float, c: float = 1.0) -> ScalarField:
    _check_speed(c)
    _guard_window(field, t, c)
    out = apply_symbol(field, sine_symbol(field.grid, t, c))
    return out.with_samples(out.samples, _grown_support(field, t, c))


def free_wave(u0: ScalarField, u1: ScalarField, t: float, c: float = 1.0) -> tuple[ScalarField, ScalarField]:
    """(u, u_t) at time t for u_tt = c^2 Delta u with data (u0, u1)."""
    _check_speed(c)
    _guard_window(u0, t, c)
    _guard_window(u1, t, c)
    grid = u0.grid
    rho = grid.frequency_magnitude
    u0_hat = forward_transform(u0).coefficients
    u1_hat = forward_transform(u1).coefficients

    cos_t = cosine_symbol(grid, t, c)
    sin_t = sine_symbol(grid, t, c)
    u_hat = cos_t * u0_hat + sin_t * u1_hat
    v_hat = -(c * rho) ** 2 * sin_t * u0_hat + cos_t * u1_hat

    real = u0.is_real and u1.is_real
    support = None
    if u0.support_radius is not None and u1.support_radius is not None:
        support = max(u0.support_radius, u1.support_radius) + c * abs(t)
    u = inverse_transform(SpectralField(grid, u_hat), real=real)
    v = inverse_transform(SpectralField(grid, v_hat), real=real)
    return u.with_samples(u.samples, support), v.with_samples(v.samples, support)


def wave_energy(u: ScalarField, v: ScalarField, c: float = 1.0) -> float:
    """E = 1/2 int v^2 + c^2 |grad u|^2, evaluated on the frequency side."""
    grid = u.grid
    density = (
        np.abs(forward_transform(v).coefficients) ** 2
        + (c * grid.frequency_magnitude) ** 2 * np.abs(forward_transform(u).coefficients) ** 2
    )
    return float(0.5 * np.sum(density) * grid.frequency_cell_volume / (2.0 * np.pi) ** 3)


def duhamel_solution(
    u0: ScalarField,
    u1: ScalarField,
    forcing: Forcing,
    t: float,
    c: float = 1.0,
    n_steps: int = 64,
) -> ScalarField:
    """
    u(t) = cos(ct|D|) u0 + sin(ct|D|)/(c|D|) u1 + int_0^t sin(c(t-s)|D|)/(c|D|) F(s) ds.

    The time integral uses the composite Simpson rule on n_steps (even) intervals.
    """
    _check_speed(c)
    if n_steps < 2 or n_steps % 2:
        raise ValueError(f"n_steps must be even and >= 2, got {n_steps}")
    grid = u0.grid
    nodes = np.linspace(0.0, t, n_steps + 1)
    weights = np.ones(n_steps + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights *= (t / n_steps) / 3.0

    u_hat = (
        cosine_symbol(grid, t, c) * forward_transform(u0).coefficients
        + sine_symbol(grid, t, c) * forward_transform(u1).coefficients
    )
    real = u0.is_real and u1.is_real
    for s, weight in zip(nodes, weights):
        source = forcing(float(s))
        real = real and source.is_real
        u_hat = u_hat + weight * sine_symbol(grid, t - s, c) * forward_transform(source).coefficients

    logger.debug(f"Duhamel quadrature with {n_steps} Simpson intervals up to t={t}")
    return inverse_transform(SpectralField(grid, u_hat), real=real)
