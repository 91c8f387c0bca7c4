"""
Unit tests for the linear propagators, the Kirchhoff oracle and the Huygens machinery.
"""
import numpy as np
import pytest

from app.estimator import make_family
from app.fields import (
    WraparoundError,
    certify_support,
    forward_transform,
    from_function,
    inverse_transform,
    make_grid,
    norm,
    radial_symbol,
    zeros,
)
from app.fields.field import SpectralField
from app.propagators import (
    GeometryError,
    HuygensShell,
    cosine_prop,
    duhamel_solution,
    free_wave,
    half_wave,
    huygens_residual,
    kirchhoff_point_eval,
    lattice_point,
    point_agreement,
    sine_prop,
    trigonometric_point_value,
    wave_energy,
)
from app.schemas.family import FamilyProfile, TestFamily

pytestmark = pytest.mark.unit


def radial_gaussian_wave(t, r):
    """Free solution with u0 = exp(-|x|^2/2), u1 = 0: ((r-t) f(r-t) + (r+t) f(r+t)) / 2r."""
    f = lambda s: np.exp(-s ** 2 / 2.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        value = ((r - t) * f(r - t) + (r + t) * f(r + t)) / (2.0 * r)
    return np.where(r > 0, value, (1.0 - t ** 2) * f(t))


@pytest.fixture(scope="module")
def huygens_grid():
    """[-5, 5)^3 with 96 points per axis; resolves certified bumps of radius 2."""
    return make_grid(5.0, 96)


# ============================================================================
# SPECTRAL PROPAGATORS
# ============================================================================

def test_propagators_at_time_zero(gaussian):
    assert np.max(np.abs(cosine_prop(gaussian, 0.0).samples - gaussian.samples)) < 1e-13
    assert np.max(np.abs(sine_prop(gaussian, 0.0).samples)) < 1e-13


def test_half_wave_is_unitary(gaussian):
    moved = half_wave(gaussian, 2.5)
    assert norm(moved) == pytest.approx(norm(gaussian), rel=1e-12)


def test_half_wave_rejects_bad_sign_and_speed(gaussian):
    with pytest.raises(ValueError):
        half_wave(gaussian, 1.0, sign=2)
    with pytest.raises(ValueError):
        half_wave(gaussian, 1.0, c=0.0)


def test_certified_support_guards_wraparound(gaussian):
    certified = certify_support(gaussian, 5.0, tolerance=1e-3)
    with pytest.raises(WraparoundError):
        cosine_prop(certified, 1.0)


def test_free_wave_matches_radial_closed_form(gaussian, small_grid):
    u, _ = free_wave(gaussian, zeros(small_grid), 1.0)
    r = small_grid.radius
    inside = r <= 4.0
    expected = radial_gaussian_wave(1.0, r)
    assert np.max(np.abs(u.samples - expected)[inside]) < 1e-6


def test_free_wave_conserves_energy(gaussian, small_grid):
    u1 = from_function(small_grid, lambda x, y, z: x * np.exp(-(x ** 2 + y ** 2 + z ** 2)))
    start = wave_energy(gaussian, u1, c=1.5)
    u, v = free_wave(gaussian, u1, 2.0, c=1.5)
    assert wave_energy(u, v, c=1.5) == pytest.approx(start, rel=1e-12)


def test_duhamel_without_forcing_is_free_wave(gaussian, small_grid):
    free, _ = free_wave(gaussian, zeros(small_grid), 1.0)
    forced = duhamel_solution(gaussian, zeros(small_grid), lambda s: zeros(small_grid), 1.0, n_steps=4)
    assert np.max(np.abs(forced.samples - free.samples)) < 1e-12


def test_duhamel_with_static_forcing(gaussian, small_grid):
    """Constant source g: u(t) = (1 - cos(t|D|)) / |D|^2 g for zero data."""
    t = 1.0
    symbol = radial_symbol(small_grid, lambda rho: (1.0 - np.cos(t * rho)) / rho ** 2, at_zero=t ** 2 / 2.0)
    expected = inverse_transform(
        SpectralField(small_grid, symbol * forward_transform(gaussian).coefficients), real=True
    )
    forced = duhamel_solution(zeros(small_grid), zeros(small_grid), lambda s: gaussian, t, n_steps=64)
    assert np.max(np.abs(forced.samples - expected.samples)) < 1e-8


def test_duhamel_rejects_odd_step_count(gaussian, small_grid):
    with pytest.raises(ValueError):
        duhamel_solution(gaussian, gaussian, lambda s: zeros(small_grid), 1.0, n_steps=5)


# ============================================================================
# KIRCHHOFF ORACLE
# ============================================================================

def test_trigonometric_interpolant_reproduces_lattice_values(gaussian, small_grid):
    point = lattice_point(small_grid, (0.3, -0.6, 1.1))
    index = tuple(int(round((v + small_grid.half_length) / small_grid.spacing)) for v in point)
    assert trigonometric_point_value(gaussian, point) == pytest.approx(gaussian.samples[index], abs=1e-12)


def test_kirchhoff_agrees_with_spectral_solution(gaussian, small_grid):
    u1 = from_function(small_grid, lambda x, y, z: 0.5 * np.exp(-((x - 0.5) ** 2 + y ** 2 + z ** 2) / 2.0))
    x = (0.25, 0.0, -0.5)
    t = 1.0
    spectral, _ = free_wave(gaussian, u1, t)
    expected = trigonometric_point_value(spectral, x)
    assert kirchhoff_point_eval(gaussian, u1, t, 1.0, x) == pytest.approx(expected, abs=1e-3)


def test_kirchhoff_rejects_sphere_leaving_box(gaussian):
    with pytest.raises(GeometryError):
        kirchhoff_point_eval(gaussian, gaussian, 5.5, 1.0, (1.0, 0.0, 0.0))
    with pytest.raises(GeometryError):
        kirchhoff_point_eval(gaussian, gaussian, 0.0)


# ============================================================================
# STRONG HUYGENS
# ============================================================================

def test_huygens_residual_is_negligible(huygens_grid):
    family = TestFamily(profile=FamilyProfile.GAUSSIAN_BUMP, support_radius=2.0, count=2, seed=4)
    u0, u1 = make_family(family, huygens_grid)
    assert huygens_residual(u0, u1, 2.25, 1.0, margin=0.5) < 1e-6


def test_huygens_residual_needs_certified_support(gaussian):
    with pytest.raises(GeometryError):
        huygens_residual(gaussian, gaussian, 2.0)


def test_huygens_residual_needs_time_past_support(huygens_grid):
    family = TestFamily(profile=FamilyProfile.GAUSSIAN_BUMP, support_radius=2.0, count=1)
    (u0,) = make_family(family, huygens_grid)
    with pytest.raises(GeometryError):
        huygens_residual(u0, u0, 1.5)


def test_point_value_only_sees_the_sphere(bump_grid):
    """Cutting the data to a shell around S(0, t) leaves the solution at the center unchanged."""
    gaussian = from_function(bump_grid, lambda x, y, z: np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    shell = HuygensShell(center=(0.0, 0.0, 0.0), t=1.5, width=0.75)
    reference = abs(sine_prop(gaussian, 1.5).samples).max()
    assert point_agreement(gaussian, shell, operator="sine") < 5e-3 * reference
    assert point_agreement(gaussian, shell, operator="cosine") < 5e-3


def test_shell_rejects_non_lattice_center(gaussian):
    shell = HuygensShell(center=(0.1, 0.0, 0.0), t=2.0, width=1.0)
    with pytest.raises(GeometryError):
        point_agreement(gaussian, shell)
    with pytest.raises(GeometryError):
        HuygensShell(t=-1.0)
