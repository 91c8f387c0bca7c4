"""
Raw spectral workspace shared by the solver and its diagnostics.

Coefficients here are plain FFT coefficients of the samples (no h^3 or origin phase);
norms convert through ||f||_2^2 = (2L)^3 / n^6 * sum |F|^2.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft

from app.core.config import settings
from app.fields import Grid3, dealias_mask
from app.fields.transforms import odd_symbol


def fft(samples: np.ndarray) -> np.ndarray:
    """FFT over the last three axes."""
    return scipy.fft.fftn(samples, axes=(-3, -2, -1), workers=settings.FFT_WORKERS)


def ifft_real(coefficients: np.ndarray) -> np.ndarray:
    return scipy.fft.ifftn(coefficients, axes=(-3, -2, -1), workers=settings.FFT_WORKERS).real


@dataclass(frozen=True, eq=False)
class SpectralWorkspace:
    """Per-grid cache of derivative symbols, dealiasing mask and Plancherel scale."""

    grid: Grid3

    @cached_property
    def rho(self) -> np.ndarray:
        return np.broadcast_to(self.grid.frequency_magnitude, self.grid.shape)

    @cached_property
    def derivative_symbols(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """i xi_p with the Nyquist planes zeroed."""
        return tuple(odd_symbol(self.grid, 1j * xi) for xi in self.grid.frequency_components)

    @cached_property
    def mask(self) -> np.ndarray:
        return dealias_mask(self.grid)

    @cached_property
    def plancherel(self) -> float:
        return (2.0 * self.grid.half_length) ** 3 / float(self.grid.points_per_axis) ** 6

    def bracket_weight(self, s: float) -> np.ndarray:
        return (1.0 + self.grid.frequency_magnitude ** 2) ** s

    def l2_squared(self, coefficients: np.ndarray, s: float = 0.0) -> float:
        density = np.abs(coefficients) ** 2
        if s:
            density = density * self.bracket_weight(s)
        return float(np.sum(density) * self.plancherel)

    def energy_squared(self, u_hat: np.ndarray, v_hat: np.ndarray, speeds: np.ndarray, s: float) -> float:
        """sum_i ||<D>^s (d_t u^i, c_i grad u^i)||_2^2 for stacked (m, n, n, n) coefficients."""
        c = np.asarray(speeds, dtype=float).reshape(-1, 1, 1, 1)
        density = np.abs(v_hat) ** 2 + (c * self.rho) ** 2 * np.abs(u_hat) ** 2
        return float(np.sum(density * self.bracket_weight(s)) * self.plancherel)

    def outside_fraction(self, coefficients: np.ndarray) -> float:
        """Share of spectral L^2 mass outside the dealiasing ball."""
        density = np.abs(coefficients) ** 2
        total = float(np.sum(density))
        if total == 0.0:
            return 0.0
        return float(np.sum(density[..., ~self.mask])) / total

    def gradient(self, coefficients: np.ndarray) -> np.ndarray:
        """(3, ...) physical gradient of stacked coefficients."""
        return np.stack([ifft_real(d * coefficients) for d in self.derivative_symbols])
