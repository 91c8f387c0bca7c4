"""
Unit tests for the field core: grid, transforms, multipliers and norms.
"""
import numpy as np
import pytest

from app.fields import (
    GridError,
    MultiplierError,
    NormError,
    SupportError,
    WraparoundError,
    apply_radial_multiplier,
    certify_support,
    dealias_mask,
    forward_transform,
    from_function,
    gradient,
    inverse_transform,
    japanese_bracket,
    laplacian,
    make_grid,
    measured_support_radius,
    norm,
    radial_symbol,
    riesz_transform,
    singular_origin_value,
    sobolev_norm,
    spectral_l2_norm,
    wraparound_check,
    zeros,
)

pytestmark = pytest.mark.unit


# ============================================================================
# GRID
# ============================================================================

def test_grid_lattice_constants(small_grid):
    """Spacing, frequency step and Nyquist follow from L and n."""
    assert small_grid.spacing == pytest.approx(0.25)
    assert small_grid.frequency_step == pytest.approx(np.pi / 6.0)
    assert small_grid.nyquist == pytest.approx(4.0 * np.pi)
    assert small_grid.axis[0] == pytest.approx(-6.0)
    assert small_grid.shape == (48, 48, 48)


@pytest.mark.parametrize("n", [7, 9, 4, 0])
def test_grid_rejects_odd_or_small_n(n):
    with pytest.raises(GridError):
        make_grid(4.0, n)


def test_grid_rejects_nonpositive_length():
    with pytest.raises(GridError):
        make_grid(0.0, 16)


def test_refined_grid_doubles_points(small_grid):
    refined = small_grid.refined()
    assert refined.points_per_axis == 96
    assert refined.half_length == small_grid.half_length


def test_wraparound_check_raises_near_box_edge(small_grid):
    """Support 1 moving at speed 1 for 5 time units plus margin reaches L = 6."""
    wraparound_check(small_grid, 1.0, 1.0, 4.0, margin=0.5)
    with pytest.raises(WraparoundError):
        wraparound_check(small_grid, 1.0, 1.0, 5.0, margin=0.5)


# ============================================================================
# TRANSFORMS
# ============================================================================

def test_gaussian_transform_matches_continuum(gaussian, small_grid):
    """F[exp(-|x|^2/2)](xi) = (2 pi)^{3/2} exp(-|xi|^2/2)."""
    spectrum = forward_transform(gaussian)
    expected = (2.0 * np.pi) ** 1.5 * np.exp(-small_grid.frequency_magnitude ** 2 / 2.0)
    assert np.max(np.abs(spectrum.coefficients - expected)) < 1e-6


def test_inverse_transform_recovers_samples(gaussian):
    back = inverse_transform(forward_transform(gaussian), real=True)
    assert np.max(np.abs(back.samples - gaussian.samples)) < 1e-12


def test_plancherel(gaussian):
    """Physical and spectral L^2 norms agree."""
    assert norm(gaussian) == pytest.approx(spectral_l2_norm(forward_transform(gaussian)), rel=1e-10)


def test_gaussian_l2_norm_closed_form(gaussian):
    """||exp(-|x|^2/2)||_2^2 = pi^{3/2}."""
    assert norm(gaussian) ** 2 == pytest.approx(np.pi ** 1.5, rel=1e-8)


def test_laplacian_of_gaussian(gaussian, small_grid):
    """Delta exp(-r^2/2) = (r^2 - 3) exp(-r^2/2)."""
    r2 = small_grid.radius ** 2
    expected = (r2 - 3.0) * np.exp(-r2 / 2.0)
    assert np.max(np.abs(laplacian(gaussian).samples - expected)) < 1e-6


def test_gradient_of_real_field_stays_real(gaussian, small_grid):
    dx, dy, dz = gradient(gaussian)
    x, _, _ = small_grid.coordinates
    assert not np.iscomplexobj(dx.samples)
    assert np.max(np.abs(dx.samples + x * gaussian.samples)) < 1e-6


def test_riesz_transforms_preserve_l2_of_mean_zero_field(small_grid):
    """sum_j ||R_j f||^2 = ||f||^2 when f has no zero mode."""
    field = from_function(small_grid, lambda x, y, z: x * np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    total = sum(norm(riesz_transform(field, axis)) ** 2 for axis in range(3))
    assert total == pytest.approx(norm(field) ** 2, rel=1e-8)


def test_radial_symbol_rejects_non_finite_multiplier(small_grid):
    with pytest.raises(MultiplierError):
        radial_symbol(small_grid, lambda rho: 1.0 / (rho - rho), at_zero=0.0)


def test_singular_origin_value_rejects_non_integrable_power(small_grid):
    assert singular_origin_value(small_grid, 1.0) > 0
    with pytest.raises(MultiplierError):
        singular_origin_value(small_grid, 3.0)


def test_identity_multiplier_is_identity(gaussian):
    same = apply_radial_multiplier(gaussian, lambda rho: np.ones_like(rho), at_zero=1.0)
    assert np.max(np.abs(same.samples - gaussian.samples)) < 1e-13


def test_dealias_mask_is_ball(small_grid):
    mask = dealias_mask(small_grid)
    assert mask[0, 0, 0]
    assert not mask[small_grid.points_per_axis // 2, 0, 0]


# ============================================================================
# NORMS AND SUPPORTS
# ============================================================================

def test_sobolev_norm_dominates_l2(gaussian):
    assert sobolev_norm(gaussian, 1.0) > sobolev_norm(gaussian, 0.0)
    assert sobolev_norm(gaussian, 0.0) == pytest.approx(norm(gaussian), rel=1e-10)


def test_weighted_norm_uses_bracket(gaussian):
    assert norm(gaussian, weight=japanese_bracket(1.0)) > norm(gaussian)
    assert norm(gaussian, p=np.inf) == pytest.approx(1.0)


def test_norm_rejects_small_exponent(gaussian):
    with pytest.raises(NormError):
        norm(gaussian, p=0.5)


def test_zero_field_norms(small_grid):
    field = zeros(small_grid)
    assert norm(field) == 0.0
    assert norm(field, p=4.0) == 0.0
    assert measured_support_radius(field) == 0.0


def test_certify_support(small_grid):
    """certify_support scans the tail against tolerance * peak."""
    field = from_function(small_grid, lambda x, y, z: np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    certified = certify_support(field, 3.0, tolerance=1e-1)
    assert certified.support_radius == 3.0
    with pytest.raises(SupportError):
        certify_support(field, 1.0)
