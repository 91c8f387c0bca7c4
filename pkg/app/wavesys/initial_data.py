"""
Initial Data
------------
Small data for the solver, scaled so a chosen smallness quantity equals epsilon:
 - compact-bump: Gaussians of width R/7 certified in B(0, R); smallness ||u0||_{H^{N+1}} + ||u1||_{H^N}
 - gaussian: plain Gaussians of a given width; same smallness
 - weighted-tail: polynomially decaying <x/l>^-q data (q = mu + 7/4) tapered off before the
   box edge; smallness sum_{|a|<=5} ||<x>^mu d^a (grad u0, u1)||_{L^2}
All data are dealiased before scaling.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from app.dyadic import smooth_step
from app.estimator.families import BUMP_WIDTH_RATIO, gaussian_bump
from app.fields import Grid3, ScalarField, SupportError, certify_support
from app.wavesys.spectral import SpectralWorkspace, fft, ifft_real
from app.wavesys.system import State

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

DATA_RESOLVED_WIDTH = 10.5  # sigma * nyquist; Gaussian tail below 1e-10 at the 2/3 ball
TAIL_OFFSET = 1.75
TAPER_START = 0.6
TAPER_WIDTH = 0.3
WEIGHTED_ORDER = 5
UNRESOLVED_FRACTION = 1e-8


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class InitialDataError(ValueError):
    """Raised when the requested data cannot be measured at the grid resolution."""
    pass


class DataProfile(str, Enum):
    COMPACT_BUMP = "compact-bump"
    GAUSSIAN = "gaussian"
    WEIGHTED_TAIL = "weighted-tail"


@dataclass
class InitialData:
    u0: tuple[ScalarField, ...]
    u1: tuple[ScalarField, ...]
    epsilon: float
    scale: float
    norms: dict[str, float] = field(default_factory=dict)

    def state(self, t: float = 0.0) -> State:
        return State(t=t, u=self.u0, v=self.u1)


# -------------------------------------------------------------------------
# Norms
# -------------------------------------------------------------------------
def _vector_sobolev(workspace: SpectralWorkspace, stacked: np.ndarray, s: float) -> float:
    return float(np.sqrt(workspace.l2_squared(fft(stacked), s)))


def multi_indices(order: int) -> list[tuple[int, int, int]]:
    return [a for a in itertools.product(range(order + 1), repeat=3) if sum(a) <= order]


def weighted_derivative_sum(
    workspace: SpectralWorkspace,
    u0: np.ndarray,
    u1: np.ndarray,
    mu: float,
    order: int = WEIGHTED_ORDER,
) -> float:
    """sum over |a| <= order of ||<x>^mu d^a (grad u0, u1)||_{L^2} (vector norm over components)."""
    grid = workspace.grid
    weight = (1.0 + grid.radius ** 2) ** (mu / 2)
    symbols = workspace.derivative_symbols
    u0_hat, u1_hat = fft(u0), fft(u1)
    vector = [symbols[p] * u0_hat for p in range(3)] + [u1_hat]
    total = 0.0
    for a in multi_indices(order):
        symbol = symbols[0] ** a[0] * symbols[1] ** a[1] * symbols[2] ** a[2]
        squared = sum(np.sum((weight * ifft_real(symbol * piece)) ** 2) for piece in vector)
        total += float(np.sqrt(squared * grid.cell_volume))
    return total


def measure_norms(grid: Grid3, u0: np.ndarray, u1: np.ndarray, order: int, mu: float) -> dict[str, float]:
    workspace = SpectralWorkspace(grid)
    weight = (1.0 + grid.radius ** 2) ** (mu / 2)
    sobolev_u0 = _vector_sobolev(workspace, u0, order + 1)
    sobolev_u1 = _vector_sobolev(workspace, u1, order)
    return {
        "sobolev_u0": sobolev_u0,
        "sobolev_u1": sobolev_u1,
        "sobolev_sum": sobolev_u0 + sobolev_u1,
        "weighted_sum": weighted_derivative_sum(workspace, u0, u1, mu),
        "weighted_u1": float(np.sqrt(np.sum((weight * u1) ** 2) * grid.cell_volume)),
    }


# -------------------------------------------------------------------------
# Profiles
# -------------------------------------------------------------------------
def tail_profile(r: np.ndarray, length: float, power: float, half_length: float) -> np.ndarray:
    """<r / l>^-power times a smooth radial taper vanishing beyond 0.9 L."""
    taper = 1.0 - smooth_step((r - TAPER_START * half_length) / (TAPER_WIDTH * half_length))
    return (1.0 + (r / length) ** 2) ** (-power / 2) * taper


def _amplitudes(rng: np.random.Generator, m: int) -> np.ndarray:
    return rng.uniform(0.5, 1.0, size=(2, m)) * rng.choice([-1.0, 1.0], size=(2, m))


def _unit_data(
    grid: Grid3,
    profile: DataProfile,
    m: int,
    rng: np.random.Generator,
    support_radius: float,
    width: float,
    length: float,
    mu: float,
) -> tuple[np.ndarray, np.ndarray]:
    amplitudes = _amplitudes(rng, m)
    if profile == DataProfile.WEIGHTED_TAIL:
        q = mu + TAIL_OFFSET
        r = grid.radius
        base = (tail_profile(r, length, q, grid.half_length), tail_profile(r, length, q + 1, grid.half_length))
        return (
            np.stack([a * base[0] for a in amplitudes[0]]),
            np.stack([a * base[1] for a in amplitudes[1]]),
        )
    if profile == DataProfile.COMPACT_BUMP:
        sigma = support_radius / BUMP_WIDTH_RATIO
        if sigma * grid.nyquist < DATA_RESOLVED_WIDTH:
            raise InitialDataError(
                f"compact bump of radius {support_radius} is not resolved on L={grid.half_length}, "
                f"n={grid.points_per_axis} (sigma * nyquist = {sigma * grid.nyquist:.3g} < {DATA_RESOLVED_WIDTH})"
            )
    else:
        sigma = width
    bump = np.real(gaussian_bump(grid, (0.0, 0.0, 0.0), sigma).samples)
    return np.stack([a * bump for a in amplitudes[0]]), np.stack([a * bump for a in amplitudes[1]])


def make_initial_data(
    grid: Grid3,
    profile: DataProfile | str,
    epsilon: float,
    seed: int = 0,
    m: int = 1,
    order: int = 4,
    mu: float = 0.5,
    support_radius: float = 1.0,
    width: float = 1.0,
    length: float = 1.0,
) -> InitialData:
    """
    Build (u0, u1) for m components with the profile's smallness quantity equal to epsilon.

    Args:
        grid: periodic grid
        profile: compact-bump, gaussian or weighted-tail
        epsilon: target smallness (>= 0); the data are linear in epsilon
        seed: generator seed for component amplitudes and signs
        m: number of components
        order: Sobolev order N of the energy norm
        mu: weight exponent for weighted-tail data
        support_radius: bump radius for compact-bump
        width: Gaussian width for gaussian
        length: decay length l for weighted-tail

    Raises:
        InitialDataError: the profile is not resolved by the grid
    """
    profile = DataProfile(profile)
    if epsilon < 0:
        raise InitialDataError(f"epsilon must be nonnegative, got {epsilon}")
    rng = np.random.default_rng(seed)
    u0, u1 = _unit_data(grid, profile, m, rng, support_radius, width, length, mu)

    workspace = SpectralWorkspace(grid)
    u0_hat, u1_hat = fft(u0), fft(u1)
    unresolved = max(workspace.outside_fraction(u0_hat), workspace.outside_fraction(u1_hat))
    if unresolved > UNRESOLVED_FRACTION:
        raise InitialDataError(
            f"{unresolved:.3g} of the data spectrum lies outside the dealiasing ball on "
            f"L={grid.half_length}, n={grid.points_per_axis}"
        )
    u0 = ifft_real(u0_hat * workspace.mask)
    u1 = ifft_real(u1_hat * workspace.mask)

    unit = measure_norms(grid, u0, u1, order, mu)
    smallness_key = "weighted_sum" if profile == DataProfile.WEIGHTED_TAIL else "sobolev_sum"
    scale = epsilon / unit[smallness_key]
    norms = {key: value * scale for key, value in unit.items()}
    norms["smallness"] = norms[smallness_key]

    fields_u0 = tuple(ScalarField(grid, scale * x) for x in u0)
    fields_u1 = tuple(ScalarField(grid, scale * x) for x in u1)
    if profile == DataProfile.COMPACT_BUMP:
        try:
            fields_u0 = tuple(certify_support(f, support_radius) for f in fields_u0)
            fields_u1 = tuple(certify_support(f, support_radius) for f in fields_u1)
        except SupportError as e:
            raise InitialDataError(f"dealiased bump lost its support certificate: {e}") from e
    logger.info(f"Initial data {profile.value}: epsilon={epsilon:g}, m={m}, scale={scale:.4g}")
    return InitialData(u0=fields_u0, u1=fields_u1, epsilon=epsilon, scale=scale, norms=norms)


def unit_profile_function(profile: DataProfile | str, mu: float, length: float, half_length: float):
    """Radial profiles (u0, u1) before amplitudes and scaling; used for quadrature cross-checks."""
    profile = DataProfile(profile)
    if profile != DataProfile.WEIGHTED_TAIL:
        raise InitialDataError(f"radial profiles are exposed for weighted-tail only, got {profile.value}")
    q = mu + TAIL_OFFSET
    return (
        lambda r: tail_profile(r, length, q, half_length),
        lambda r: tail_profile(r, length, q + 1, half_length),
    )
