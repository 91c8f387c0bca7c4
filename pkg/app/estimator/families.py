"""
Test Families
-------------
Seeded generation of the data fields fed to the inequality checks:
 - gaussian-bump: numerically compact Gaussians (sigma = R / 7) certified in B(0, R)
 - shifted-bump: the same bump centered at distance `radius` along a seeded direction
 - annular-shell: Gaussian bumps projected onto the homogeneous shell k
 - random-bandlimited: random spectrum between shells k_lo and k_hi

Randomness is drawn on the frequency lattice of the box (which depends on L only), so a
family keeps its members when the number of points per axis is refined.
"""

import logging
from typing import Sequence

import numpy as np

from app.dyadic import ProjectionKind, ResolutionError, check_resolvable, frequency_symbol
from app.fields import (
    ScalarField,
    SpectralField,
    apply_symbol,
    certify_support,
    from_function,
    inverse_transform,
    norm,
)
from app.fields.grid import Grid3
from app.schemas.family import FamilyProfile, TestFamily

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

BUMP_WIDTH_RATIO = 7.0
MIN_RESOLVED_WIDTH = 6.8  # sigma * nyquist; the Gaussian spectrum drops below 1e-10 at the edge
MIN_WIDTH_SCALE = 0.8  # narrowest member is MIN_WIDTH_SCALE * sigma


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class FamilyError(ValueError):
    """Raised when a family profile is incompatible with the grid."""
    pass


# -------------------------------------------------------------------------
# Members
# -------------------------------------------------------------------------
def gaussian_bump(grid: Grid3, center, sigma: float, amplitude: float = 1.0) -> ScalarField:
    cx, cy, cz = center
    return from_function(
        grid,
        lambda x, y, z: amplitude * np.exp(-((x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2) / (2 * sigma ** 2)),
    )


def _bump_width(grid: Grid3, support_radius: float) -> float:
    sigma = support_radius / BUMP_WIDTH_RATIO
    if MIN_WIDTH_SCALE * sigma * grid.nyquist < MIN_RESOLVED_WIDTH:
        raise FamilyError(
            f"bump of radius {support_radius} is not resolved on L={grid.half_length}, "
            f"n={grid.points_per_axis}; need n >= {int(np.ceil(2 * MIN_RESOLVED_WIDTH * BUMP_WIDTH_RATIO * grid.half_length / (np.pi * MIN_WIDTH_SCALE * support_radius)))}"
        )
    return sigma


def _random_direction(rng: np.random.Generator) -> np.ndarray:
    direction = rng.normal(size=3)
    return direction / np.linalg.norm(direction)


def _bumps(spec: TestFamily, grid: Grid3, rng: np.random.Generator, shifted: bool) -> list[ScalarField]:
    radius = spec.support_radius
    reach = radius + (spec.radius if shifted else 0.0)
    if reach >= grid.half_length:
        raise FamilyError(f"bump support {reach} does not fit in the box half-length {grid.half_length}")
    base_sigma = _bump_width(grid, radius)

    members = []
    for _ in range(spec.count):
        scale = rng.uniform(MIN_WIDTH_SCALE, 1.0)
        amplitude = rng.uniform(0.5, 1.5)
        offset = _random_direction(rng) * rng.uniform(0.0, 1.0 - scale) * radius
        if shifted:
            offset = offset + _random_direction(rng) * spec.radius
        bump = gaussian_bump(grid, offset, base_sigma * scale, amplitude)
        members.append(certify_support(bump, reach))
    return members


def _annular_shells(spec: TestFamily, grid: Grid3, rng: np.random.Generator) -> list[ScalarField]:
    symbol = frequency_symbol(grid, ProjectionKind.HOMOGENEOUS, spec.k)
    sigma = 2.0 ** -spec.k
    spread = grid.half_length / 4
    members = []
    for _ in range(spec.count):
        center = rng.uniform(-spread, spread, size=3)
        amplitude = rng.uniform(0.5, 1.5)
        members.append(apply_symbol(gaussian_bump(grid, center, sigma, amplitude), symbol))
    return members


def _band_spectrum(spec: TestFamily, grid: Grid3, rng: np.random.Generator) -> np.ndarray:
    """Random complex coefficients on the lattice cube covering the band, embedded in FFT order."""
    top = 1.6 * 2.0 ** (spec.k_hi + 1)
    reach = int(np.ceil(top / grid.frequency_step))
    n = grid.points_per_axis
    if reach >= n // 2:
        raise FamilyError(f"band up to shell {spec.k_hi} exceeds the lattice for n={n}")
    width = 2 * reach + 1
    block = rng.normal(size=(width,) * 3) + 1j * rng.normal(size=(width,) * 3)
    spectrum = np.zeros(grid.shape, dtype=complex)
    index = np.arange(-reach, reach + 1) % n
    spectrum[np.ix_(index, index, index)] = block
    return spectrum


def _random_bandlimited(spec: TestFamily, grid: Grid3, rng: np.random.Generator) -> list[ScalarField]:
    band = sum(frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, k) for k in range(spec.k_lo, spec.k_hi + 1))
    members = []
    for _ in range(spec.count):
        spectrum = _band_spectrum(spec, grid, rng) * band
        member = inverse_transform(SpectralField(grid, spectrum)).real_part()
        size = norm(member)
        members.append(member * (1.0 / size) if size > 0 else member)
    return members


def make_family(spec: TestFamily, grid: Grid3) -> list[ScalarField]:
    """
    Generate the members of a test family.

    Args:
        spec: validated family description
        grid: grid the members live on

    Returns:
        list of spec.count fields; compact profiles carry a certified support radius

    Raises:
        FamilyError: if the profile cannot be represented on the grid
    """
    rng = np.random.default_rng(spec.seed)
    try:
        if spec.profile == FamilyProfile.GAUSSIAN_BUMP:
            members = _bumps(spec, grid, rng, shifted=False)
        elif spec.profile == FamilyProfile.SHIFTED_BUMP:
            members = _bumps(spec, grid, rng, shifted=True)
        elif spec.profile == FamilyProfile.ANNULAR_SHELL:
            check_resolvable(grid, ProjectionKind.HOMOGENEOUS, spec.k)
            members = _annular_shells(spec, grid, rng)
        else:
            if spec.k_lo < -1:
                raise FamilyError(f"random-bandlimited needs k_lo >= -1, got {spec.k_lo}")
            check_resolvable(grid, ProjectionKind.NONHOMOGENEOUS, spec.k_hi)
            members = _random_bandlimited(spec, grid, rng)
    except ResolutionError as e:
        raise FamilyError(str(e)) from e

    logger.debug(f"Family {spec.profile.value} seed={spec.seed}: {len(members)} members")
    return members


def resolve_members(family: TestFamily | Sequence[ScalarField], grid: Grid3) -> list[ScalarField]:
    """Accept either a family description or already generated fields."""
    if isinstance(family, TestFamily):
        return make_family(family, grid)
    members = list(family)
    for member in members:
        if member.grid != grid:
            raise FamilyError("family members live on a different grid")
    return members
