"""
Lattice norms: L^p with optional space-time weights, Sobolev norms through Plancherel.
"""

import logging
from typing import Callable

import numpy as np

from app.fields.field import ScalarField, SpectralField
from app.fields.transforms import forward_transform

logger = logging.getLogger(__name__)

Weight = Callable[[float, np.ndarray], np.ndarray]


class NormError(ValueError):
    """Raised for invalid exponents or non-finite weights."""
    pass


def japanese_bracket(beta: float) -> Weight:
    """<x>^beta = (1 + |x|^2)^(beta/2)."""
    return lambda t, r: (1.0 + r ** 2) ** (beta / 2.0)


def spacetime_weight(nu: float) -> Weight:
    """A_nu(t, x) = (1 + t + |x|)^nu."""
    return lambda t, r: (1.0 + t + r) ** nu


def lattice_lp(values: np.ndarray, p: float, cell_volume: float) -> float:
    """(sum |v|^p h^3)^(1/p), max for p = inf; scaled by the peak so large p cannot overflow."""
    magnitude = np.abs(values)
    peak = float(magnitude.max()) if magnitude.size else 0.0
    if np.isinf(p):
        return peak
    if peak == 0.0:
        return 0.0
    if p == 2:
        return float(np.sqrt(np.sum(magnitude ** 2) * cell_volume))
    return peak * float(np.sum((magnitude / peak) ** p) * cell_volume) ** (1.0 / p)


def norm(
    field: ScalarField,
    p: float = 2.0,
    weight: Weight | np.ndarray | None = None,
    t: float = 0.0,
) -> float:
    """
    ||w f||_{L^p} by lattice quadrature.

    Args:
        field: sampled function
        p: exponent in [1, inf]
        weight: None, an array on the lattice, or a callable of (t, |x|)
        t: time passed to a callable weight

    Returns:
        float
    """
    if not p >= 1:
        raise NormError(f"exponent p must be >= 1, got {p}")
    values = field.samples
    if weight is not None:
        w = weight(t, field.grid.radius) if callable(weight) else np.asarray(weight)
        if not np.all(np.isfinite(w)):
            raise NormError("weight is not finite on the lattice")
        values = np.abs(values) * w
    return lattice_lp(values, p, field.grid.cell_volume)


def spectral_l2_norm(spectrum: SpectralField, s: float = 0.0) -> float:
    """(2 pi)^-3 sum <xi>^(2s) |F|^2 (pi/L)^3, the frequency side of Plancherel."""
    grid = spectrum.grid
    density = np.abs(spectrum.coefficients) ** 2
    if s:
        density = density * (1.0 + grid.frequency_magnitude ** 2) ** s
    return float(np.sqrt(np.sum(density) * grid.frequency_cell_volume / (2.0 * np.pi) ** 3))


def sobolev_norm(field: ScalarField, s: float) -> float:
    """||<D>^s f||_{L^2}."""
    return spectral_l2_norm(forward_transform(field), s)
