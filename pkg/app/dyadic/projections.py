"""
Dyadic Projections
------------------
Littlewood-Paley projections in frequency and dyadic cutoffs in physical space:
 - P_k (k >= -1), P_dot_k (k in Z), widened P_[[k]]
 - Q_j (j >= -1), Q_dot_j
 - Besov norms with a truncation-tail report
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from app.dyadic.cutoff import PSI, ProjectionKind, homogeneous_shell, nonhomogeneous_shell, shell_profile
from app.fields import ScalarField, apply_symbol, forward_transform, norm, radial_symbol
from app.fields.grid import Grid3

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

BESOV_TAIL_TOLERANCE = 1e-8


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class ResolutionError(ValueError):
    """Raised when a dyadic shell is not resolved by the grid."""
    pass


# -------------------------------------------------------------------------
# Frequency projections
# -------------------------------------------------------------------------
def check_resolvable(grid: Grid3, kind: ProjectionKind, k: int) -> None:
    kind = ProjectionKind(kind)
    k_min, k_max = grid.resolvable_range()
    lowest = k_min if kind in (ProjectionKind.HOMOGENEOUS, ProjectionKind.HOMOGENEOUS_WIDENED) else -1
    if k < lowest or k > k_max:
        raise ResolutionError(
            f"{kind.value} shell k={k} outside resolvable range [{lowest}, {k_max}] "
            f"for L={grid.half_length}, n={grid.points_per_axis}"
        )


def frequency_symbol(grid: Grid3, kind: ProjectionKind, k: int) -> np.ndarray:
    """Shell profile sampled on |xi| (no resolution check)."""
    profile = shell_profile(kind, k)
    return radial_symbol(grid, profile, at_zero=float(profile(0.0)))


def project(field_: ScalarField, kind: ProjectionKind, k: int) -> ScalarField:
    """
    Frequency projection of a field.

    Args:
        field_: input field
        kind: nonhomogeneous (P_k, k >= -1), homogeneous (P_dot_k) or widened (P_[[k]])
        k: shell index

    Returns:
        ScalarField with spectrum inside the shell annulus

    Raises:
        ResolutionError: if the shell is not resolved by the grid
    """
    check_resolvable(field_.grid, kind, k)
    return apply_symbol(field_, frequency_symbol(field_.grid, kind, k))


def top_shell(grid: Grid3) -> int:
    """First k with psi(|xi| / 2^k) = 1 on the whole lattice."""
    max_frequency = np.sqrt(3.0) * grid.nyquist
    return int(np.ceil(np.log2(max_frequency / PSI.plateau)))


def littlewood_paley_pieces(field_: ScalarField, homogeneous: bool = False) -> dict[int, ScalarField]:
    """All shells whose sum reproduces the field on the lattice (mean removed when homogeneous)."""
    grid = field_.grid
    lowest = grid.resolvable_range()[0] if homogeneous else -1
    kind = ProjectionKind.HOMOGENEOUS if homogeneous else ProjectionKind.NONHOMOGENEOUS
    return {
        k: apply_symbol(field_, frequency_symbol(grid, kind, k))
        for k in range(lowest, top_shell(grid) + 1)
    }


# -------------------------------------------------------------------------
# Physical-space cutoffs
# -------------------------------------------------------------------------
def physical_cutoff(field_: ScalarField, kind: str, j: int) -> ScalarField:
    """Pointwise product with psi_j(|x|) (kind "Q", j >= -1) or psi_dot_j(|x|) (kind "Qdot")."""
    radius = field_.grid.radius
    if kind == "Q":
        if j < -1:
            raise ValueError(f"Q_j requires j >= -1, got {j}")
        weight = nonhomogeneous_shell(radius, j)
    elif kind == "Qdot":
        weight = homogeneous_shell(radius, j)
    else:
        raise ValueError(f"Unknown physical cutoff kind: {kind}")
    if 0.625 * 2.0 ** j > np.sqrt(3.0) * field_.grid.half_length:
        logger.debug(f"Q_{j} lies outside the box; output is zero")
    return ScalarField(field_.grid, field_.samples * weight)


def top_cutoff(grid: Grid3) -> int:
    return int(np.ceil(np.log2(np.sqrt(3.0) * grid.half_length / PSI.plateau)))


def physical_pieces(field_: ScalarField) -> dict[int, ScalarField]:
    """Q_j f for j = -1 .. top; the pieces sum to f pointwise."""
    return {j: physical_cutoff(field_, "Q", j) for j in range(-1, top_cutoff(field_.grid) + 1)}


# -------------------------------------------------------------------------
# Besov norms
# -------------------------------------------------------------------------
@dataclass
class BesovProfile:
    """Per-shell values 2^(ks) ||P_k f||_p up to k_max plus the L^2 tail beyond k_max."""

    shells: list[int]
    values: list[float]
    tail_fraction: float
    flags: list[str] = field(default_factory=list)

    def aggregate(self, r: float) -> float:
        if not self.values:
            return 0.0
        return float(np.linalg.norm(np.asarray(self.values), ord=r))


def besov_profile(field_: ScalarField, s: float, p: float, homogeneous: bool = False) -> BesovProfile:
    grid = field_.grid
    k_min, k_max = grid.resolvable_range()
    kind = ProjectionKind.HOMOGENEOUS if homogeneous else ProjectionKind.NONHOMOGENEOUS
    shells = list(range(k_min if homogeneous else -1, k_max + 1))
    values = [
        2.0 ** (k * s) * norm(apply_symbol(field_, frequency_symbol(grid, kind, k)), p)
        for k in shells
    ]

    spectrum = np.abs(forward_transform(field_).coefficients) ** 2
    total = spectrum.sum()
    kept = PSI(grid.frequency_magnitude / 2.0 ** k_max) ** 2
    tail_fraction = float(np.sqrt((spectrum * (1.0 - kept)).sum() / total)) if total > 0 else 0.0

    flags = []
    if tail_fraction > BESOV_TAIL_TOLERANCE:
        flags.append("besov-tail")
        logger.warning(f"Besov sum truncated at k_max={k_max} leaves tail fraction {tail_fraction:.2e}")
    return BesovProfile(shells, values, tail_fraction, flags)


def besov_norm(field_: ScalarField, s: float, p: float, r: float, homogeneous: bool = False) -> float:
    """l^r over shells of 2^(ks) ||P_k f||_{L^p}, truncated at the resolvable k_max."""
    if p < 1 or r < 1:
        raise ValueError(f"Besov exponents must be >= 1, got p={p}, r={r}")
    return besov_profile(field_, s, p, homogeneous).aggregate(r)
