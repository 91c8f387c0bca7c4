"""
Field values on a periodic grid: physical samples and Fourier coefficients.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from app.core.config import settings
from app.fields.grid import Grid3, GridError

logger = logging.getLogger(__name__)


class SupportError(ValueError):
    """Raised when a field is not numerically supported in the claimed ball."""
    pass


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Samples of a (real or complex) function on the physical lattice.

    support_radius, when set, certifies that |samples| <= SUPPORT_TOLERANCE * max|samples|
    outside the ball B(0, support_radius).
    """

    grid: Grid3
    samples: np.ndarray
    support_radius: float | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.shape != self.grid.shape:
            raise GridError(f"samples shape {samples.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "samples", samples)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.samples)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def with_samples(self, samples: np.ndarray, support_radius: float | None = None) -> "ScalarField":
        return ScalarField(self.grid, samples, support_radius)

    def real_part(self) -> "ScalarField":
        return replace(self, samples=np.real(self.samples))

    def _combine(self, other, op) -> "ScalarField":
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise GridError("fields live on different grids")
            return ScalarField(self.grid, op(self.samples, other.samples))
        return ScalarField(self.grid, op(self.samples, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.samples, self.support_radius)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Coefficients approximating the continuum transform on the frequency lattice (FFT order)."""

    grid: Grid3
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients)
        if coefficients.shape != self.grid.shape:
            raise GridError(
                f"coefficients shape {coefficients.shape} does not match grid {self.grid.shape}"
            )
        object.__setattr__(self, "coefficients", coefficients)


def zeros(grid: Grid3) -> ScalarField:
    return ScalarField(grid, np.zeros(grid.shape), support_radius=0.0)


def from_function(grid: Grid3, profile, support_radius: float | None = None) -> ScalarField:
    """Sample profile(x, y, z) on the lattice."""
    x, y, z = grid.coordinates
    samples = np.broadcast_to(profile(x, y, z), grid.shape).copy()
    return ScalarField(grid, samples, support_radius)


def certify_support(field: ScalarField, radius: float, tolerance: float | None = None) -> ScalarField:
    """Re-scan the field and attach support_radius = radius, or raise SupportError."""
    tolerance = settings.SUPPORT_TOLERANCE if tolerance is None else tolerance
    magnitude = np.abs(field.samples)
    peak = magnitude.max()
    outside = field.grid.radius > radius
    tail = magnitude[outside].max() if np.any(outside) else 0.0
    if tail > tolerance * peak:
        raise SupportError(
            f"field reaches {tail:.3e} (> {tolerance:.1e} x max {peak:.3e}) outside radius {radius}"
        )
    return ScalarField(field.grid, field.samples, float(radius))


def measured_support_radius(field: ScalarField, threshold: float = 1e-8) -> float:
    """Largest lattice radius where |f| exceeds threshold * max|f| (0 for the zero field)."""
    magnitude = np.abs(field.samples)
    peak = magnitude.max()
    if peak == 0:
        return 0.0
    above = magnitude > threshold * peak
    return float(field.grid.radius[above].max())
