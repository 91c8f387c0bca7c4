"""
Kirchhoff spherical-mean evaluation of the free wave solution at a single point, an oracle
independent of the spectral propagators:

    u(t, x) = d/dt [t M_u0(x, ct)] + t M_u1(x, ct),   M_f(x, r) = mean of f over |y - x| = r
"""

import logging
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import ndimage

from app.fields import ScalarField
from app.fields.grid import Grid3

logger = logging.getLogger(__name__)

SPLINE_ORDER = 5
DEFAULT_POLAR_NODES = 32
DEFAULT_AZIMUTH_NODES = 64
TIME_STEP_FRACTION = 1e-4


class GeometryError(ValueError):
    """Raised when a sphere or shell does not fit inside the periodic box."""
    pass


@lru_cache(maxsize=8)
def sphere_rule(polar_nodes: int = DEFAULT_POLAR_NODES, azimuth_nodes: int = DEFAULT_AZIMUTH_NODES):
    """Unit directions and weights (summing to 1) of the Gauss-Legendre x uniform azimuth rule."""
    cos_theta, polar_weights = np.polynomial.legendre.leggauss(polar_nodes)
    phi = 2.0 * np.pi * np.arange(azimuth_nodes) / azimuth_nodes
    sin_theta = np.sqrt(1.0 - cos_theta ** 2)
    directions = np.stack(
        [
            np.outer(sin_theta, np.cos(phi)).ravel(),
            np.outer(sin_theta, np.sin(phi)).ravel(),
            np.repeat(cos_theta, azimuth_nodes),
        ]
    )
    weights = np.repeat(polar_weights, azimuth_nodes) / (2.0 * azimuth_nodes)
    return directions, weights


class SplineSampler:
    """Periodic quintic spline interpolant of a field, prefiltered once."""

    def __init__(self, field: ScalarField):
        self.grid = field.grid
        samples = field.samples
        parts = [samples.real, samples.imag] if np.iscomplexobj(samples) else [samples]
        self._coefficients = [
            ndimage.spline_filter(np.asarray(part, dtype=float), order=SPLINE_ORDER, mode="grid-wrap")
            for part in parts
        ]

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """points has shape (3, m) in physical coordinates."""
        index = (np.asarray(points) + self.grid.half_length) / self.grid.spacing
        values = [
            ndimage.map_coordinates(c, index, order=SPLINE_ORDER, mode="grid-wrap", prefilter=False)
            for c in self._coefficients
        ]
        return values[0] if len(values) == 1 else values[0] + 1j * values[1]


def spherical_mean(sampler: SplineSampler, center: Sequence[float], radius: float,
                   polar_nodes: int = DEFAULT_POLAR_NODES,
                   azimuth_nodes: int = DEFAULT_AZIMUTH_NODES) -> float:
    directions, weights = sphere_rule(polar_nodes, azimuth_nodes)
    points = np.asarray(center, dtype=float)[:, None] + radius * directions
    return sampler(points) @ weights


def _check_inside(grid: Grid3, center: np.ndarray, radius: float) -> None:
    if np.max(np.abs(center)) + radius >= grid.half_length:
        raise GeometryError(
            f"sphere of radius {radius:.4g} around {center.tolist()} leaves the box [-{grid.half_length}, {grid.half_length})^3"
        )


def kirchhoff_point_eval(
    u0: ScalarField,
    u1: ScalarField,
    t: float,
    c: float = 1.0,
    x: Sequence[float] = (0.0, 0.0, 0.0),
    polar_nodes: int = DEFAULT_POLAR_NODES,
    azimuth_nodes: int = DEFAULT_AZIMUTH_NODES,
) -> float:
    """
    Value of the free wave solution with data (u0, u1) at (t, x).

    The time derivative of t M_u0(x, ct) is a central difference with step t * 1e-4.

    Raises:
        GeometryError: if t <= 0 or the sphere S(x, c(t + dt)) leaves the box
    """
    if not t > 0:
        raise GeometryError(f"Kirchhoff evaluation needs t > 0, got {t}")
    if not c > 0:
        raise ValueError(f"wave speed must be positive, got {c}")
    center = np.asarray(x, dtype=float)
    dt = TIME_STEP_FRACTION * t
    _check_inside(u0.grid, center, c * (t + dt))

    data = SplineSampler(u0)
    velocity = SplineSampler(u1)
    nodes = (polar_nodes, azimuth_nodes)

    forward = (t + dt) * spherical_mean(data, center, c * (t + dt), *nodes)
    backward = (t - dt) * spherical_mean(data, center, c * (t - dt), *nodes)
    value = (forward - backward) / (2.0 * dt) + t * spherical_mean(velocity, center, c * t, *nodes)
    logger.debug(f"Kirchhoff value at t={t}, x={center.tolist()}: {value}")
    return value


def trigonometric_point_value(field: ScalarField, x: Sequence[float]) -> complex:
    """Evaluate the trigonometric interpolant of a band-limited field at an arbitrary point."""
    grid = field.grid
    coefficients = np.fft.fftn(field.samples)
    coefficients[grid.nyquist_planes] = 0.0
    kx, ky, kz = grid.frequency_components
    offset = np.asarray(x, dtype=float) + grid.half_length
    phase = np.exp(1j * (kx * offset[0] + ky * offset[1] + kz * offset[2]))
    value = np.sum(coefficients * phase) / coefficients.size
    return value.real if field.is_real else value
