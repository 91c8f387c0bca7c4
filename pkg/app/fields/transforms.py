"""
Fourier Transforms and Multipliers
----------------------------------
Discrete counterparts of the continuum transform Ff(xi) = int exp(-i x.xi) f(x) dx:
 - forward: h^3 * exp(i L sum xi) * FFT(samples)
 - inverse: IFFT(exp(-i L sum xi) F) / h^3, i.e. (2 pi)^-3 (pi/L)^3 times the lattice sum
 - radial and vector multipliers (|D|^-s, exp(i t |D|), Riesz transforms, derivatives)
"""

import logging
from typing import Callable

import numpy as np
import scipy.fft

from app.core.config import settings
from app.fields.field import ScalarField, SpectralField
from app.fields.grid import Grid3

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

RadialFunction = Callable[[np.ndarray], np.ndarray]


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class MultiplierError(ValueError):
    """Raised when a multiplier is not finite on the frequency lattice."""
    pass


# -------------------------------------------------------------------------
# Raw FFT helpers
# -------------------------------------------------------------------------
def _fft(samples: np.ndarray) -> np.ndarray:
    return scipy.fft.fftn(samples, workers=settings.FFT_WORKERS)


def _ifft(coefficients: np.ndarray) -> np.ndarray:
    return scipy.fft.ifftn(coefficients, workers=settings.FFT_WORKERS)


# -------------------------------------------------------------------------
# Transforms
# -------------------------------------------------------------------------
def forward_transform(field: ScalarField) -> SpectralField:
    grid = field.grid
    coefficients = grid.cell_volume * grid.origin_phase * _fft(field.samples)
    return SpectralField(grid, coefficients)


def inverse_transform(spectrum: SpectralField, real: bool = False) -> ScalarField:
    grid = spectrum.grid
    samples = _ifft(np.conj(grid.origin_phase) * spectrum.coefficients) / grid.cell_volume
    return ScalarField(grid, samples.real if real else samples)


# -------------------------------------------------------------------------
# Multipliers
# -------------------------------------------------------------------------
def radial_symbol(grid: Grid3, multiplier: RadialFunction, at_zero: complex) -> np.ndarray:
    """
    Evaluate m(|xi|) on the lattice with the caller's value at xi = 0.

    Raises:
        MultiplierError: if m is not finite somewhere on the lattice
    """
    rho = grid.frequency_magnitude.copy()
    rho[0, 0, 0] = 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.asarray(multiplier(rho))
    dtype = np.result_type(values.dtype, np.asarray(at_zero).dtype, np.float64)
    symbol = np.array(np.broadcast_to(values, grid.shape), dtype=dtype)
    symbol[0, 0, 0] = at_zero
    if not np.all(np.isfinite(symbol)):
        raise MultiplierError("multiplier is not finite on the frequency lattice")
    return symbol


def apply_symbol(field: ScalarField, symbol: np.ndarray, preserves_real: bool | None = None) -> ScalarField:
    """
    Multiply the spectrum of field by a precomputed symbol array.

    A symbol preserves real fields when m(-xi) = conj(m(xi)); real radial symbols do.
    """
    if preserves_real is None:
        preserves_real = not np.iscomplexobj(symbol)
    samples = _ifft(symbol * _fft(field.samples))
    if field.is_real and preserves_real:
        samples = samples.real
    return ScalarField(field.grid, samples)


def apply_radial_multiplier(field: ScalarField, multiplier: RadialFunction, at_zero: complex) -> ScalarField:
    return apply_symbol(field, radial_symbol(field.grid, multiplier, at_zero))


def odd_symbol(grid: Grid3, values: np.ndarray) -> np.ndarray:
    """Zero an odd symbol on the Nyquist planes so real fields stay real."""
    symbol = np.array(np.broadcast_to(values, grid.shape), dtype=complex)
    symbol[grid.nyquist_planes] = 0.0
    return symbol


def riesz_symbol(grid: Grid3, axis: int) -> np.ndarray:
    rho = grid.frequency_magnitude.copy()
    rho[0, 0, 0] = 1.0
    symbol = odd_symbol(grid, 1j * grid.frequency_components[axis] / rho)
    symbol[0, 0, 0] = 0.0
    return symbol


def riesz_transform(field: ScalarField, axis: int) -> ScalarField:
    """R_j = d_j / |D|, multiplier i xi_j / |xi| (zero at xi = 0 and on Nyquist planes)."""
    return apply_symbol(field, riesz_symbol(field.grid, axis), preserves_real=True)


def spectral_derivative(field: ScalarField, axis: int) -> ScalarField:
    grid = field.grid
    symbol = odd_symbol(grid, 1j * grid.frequency_components[axis])
    return apply_symbol(field, symbol, preserves_real=True)


def gradient(field: ScalarField) -> tuple[ScalarField, ScalarField, ScalarField]:
    return tuple(spectral_derivative(field, axis) for axis in range(3))


def laplacian(field: ScalarField) -> ScalarField:
    return apply_symbol(field, -field.grid.frequency_magnitude ** 2)


def singular_origin_value(grid: Grid3, power: float) -> float:
    """
    xi = 0 convention for |xi|^-power (power < 3): average of |xi|^-power over the
    ball with the volume of one frequency cell.
    """
    if power >= 3:
        raise MultiplierError(f"|xi|^-{power} is not locally integrable in three dimensions")
    radius = grid.frequency_step * (3.0 / (4.0 * np.pi)) ** (1.0 / 3.0)
    integral = 4.0 * np.pi * radius ** (3.0 - power) / (3.0 - power)
    return float(integral / grid.frequency_cell_volume)


def dealias_mask(grid: Grid3, fraction: float = 2.0 / 3.0) -> np.ndarray:
    """Spherical truncation mask |xi| <= fraction * Nyquist."""
    return grid.frequency_magnitude <= fraction * grid.nyquist
