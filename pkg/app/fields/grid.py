"""
Periodic Grid
-------------
Discretization of R^3 by the periodic box [-L, L)^3:
 - physical lattice x_j = -L + j h with h = 2L / n
 - frequency lattice xi_j = pi j / L for j in [-n/2, n/2), stored in FFT order
 - validity window for finite propagation speed (no wraparound)
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from app.core.config import settings

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

MIN_POINTS_PER_AXIS = 8


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class GridError(ValueError):
    """Raised when grid parameters or field shapes are inconsistent."""
    pass


class WraparoundError(ValueError):
    """Raised when a propagating support would reach the periodic images."""
    pass


# -------------------------------------------------------------------------
# Grid
# -------------------------------------------------------------------------
@dataclass(frozen=True)
class Grid3:
    """Cubic periodic box with n points per axis. Lattice arrays are cached per instance."""

    half_length: float
    points_per_axis: int

    @property
    def shape(self) -> tuple[int, int, int]:
        n = self.points_per_axis
        return (n, n, n)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing ** 3

    @property
    def frequency_step(self) -> float:
        return np.pi / self.half_length

    @property
    def frequency_cell_volume(self) -> float:
        return self.frequency_step ** 3

    @property
    def nyquist(self) -> float:
        """Largest resolved wavenumber per axis, n*pi/(2L)."""
        return self.frequency_step * self.points_per_axis / 2

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_length + self.spacing * np.arange(self.points_per_axis)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    @cached_property
    def coordinates(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Sparse (broadcastable) physical coordinate arrays."""
        return tuple(np.meshgrid(self.axis, self.axis, self.axis, indexing="ij", sparse=True))

    @cached_property
    def radius(self) -> np.ndarray:
        x, y, z = self.coordinates
        return np.sqrt(x ** 2 + y ** 2 + z ** 2)

    @cached_property
    def frequency_components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Sparse (broadcastable) frequency component arrays in FFT order."""
        k = self.wavenumbers
        return tuple(np.meshgrid(k, k, k, indexing="ij", sparse=True))

    @cached_property
    def frequency_magnitude(self) -> np.ndarray:
        kx, ky, kz = self.frequency_components
        return np.sqrt(kx ** 2 + ky ** 2 + kz ** 2)

    @cached_property
    def nyquist_planes(self) -> np.ndarray:
        """Mask of lattice points on a Nyquist plane (no symmetric partner)."""
        kx, ky, kz = self.frequency_components
        edge = -self.nyquist
        return np.isclose(kx, edge) | np.isclose(ky, edge) | np.isclose(kz, edge)

    @cached_property
    def origin_phase(self) -> np.ndarray:
        """exp(i L (xi_1 + xi_2 + xi_3)); shifts the FFT origin to the box corner x = -L."""
        kx, ky, kz = self.frequency_components
        return np.exp(1j * self.half_length * (kx + ky + kz))

    def resolvable_range(self) -> tuple[int, int]:
        """Dyadic shells [k_min, k_max] whose annuli sit inside the lattice."""
        k_min = int(np.ceil(np.log2(self.frequency_step))) - 1
        k_max = int(np.floor(np.log2(self.nyquist))) - 2
        return k_min, k_max

    def refined(self) -> "Grid3":
        """Same box with twice the points per axis."""
        return Grid3(self.half_length, 2 * self.points_per_axis)


def make_grid(half_length: float, points_per_axis: int) -> Grid3:
    """
    Build a validated periodic grid.

    Args:
        half_length: L > 0, the box is [-L, L)^3
        points_per_axis: even n >= 8

    Returns:
        Grid3
    """
    if isinstance(points_per_axis, bool) or int(points_per_axis) != points_per_axis:
        raise GridError(f"points_per_axis must be an integer, got {points_per_axis!r}")
    n = int(points_per_axis)
    if n < MIN_POINTS_PER_AXIS or n % 2:
        raise GridError(f"points_per_axis must be even and >= {MIN_POINTS_PER_AXIS}, got {n}")
    if not np.isfinite(half_length) or half_length <= 0:
        raise GridError(f"half_length must be positive, got {half_length}")

    grid = Grid3(float(half_length), n)
    logger.debug(f"Grid L={grid.half_length} n={n} h={grid.spacing}")
    return grid


def wraparound_check(
    grid: Grid3,
    support_radius: float,
    max_speed: float,
    horizon: float,
    margin: float | None = None,
) -> None:
    """Raise WraparoundError unless R0 + c_max T + margin < L."""
    margin = settings.SHELL_MARGIN if margin is None else margin
    reach = support_radius + max_speed * abs(horizon) + margin
    if reach >= grid.half_length:
        raise WraparoundError(
            f"Support {support_radius} + speed {max_speed} x horizon {horizon} + margin {margin} "
            f"= {reach:.4g} reaches the box half-length {grid.half_length}"
        )
