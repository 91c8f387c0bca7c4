"""
Unit tests for the oscillatory wave kernels.
"""
import numpy as np
import pytest
from pydantic import ValidationError

from app.kernels import (
    InsufficientSamplesError,
    Regime,
    RegimeMixError,
    calibrate_kernel,
    classify_regime,
    decay_slope_fit,
    eval_kernel,
    panel_quadrature,
    regime_bound,
    sphere_hat,
    sphere_hat_components,
    static_mass,
)
from app.schemas.kernel import KernelSpec

pytestmark = pytest.mark.unit


# ============================================================================
# BUILDING BLOCKS
# ============================================================================

def test_panel_quadrature_integrates_sine():
    result = panel_quadrature(np.sin, [0.0, np.pi], 0.5, 1e-12)
    assert result.converged
    assert result.value.real == pytest.approx(2.0, abs=1e-12)


def test_panel_quadrature_flags_exhausted_budget():
    result = panel_quadrature(lambda x: np.sin(1e4 * x ** 2), [0.0, 10.0], 5.0, 1e-14, panel_budget=50)
    assert not result.converged


def test_sphere_hat_at_origin_and_zero():
    assert sphere_hat(0.0) == pytest.approx(4.0 * np.pi)
    assert abs(sphere_hat(np.pi)) < 1e-12
    with pytest.raises(ValueError):
        sphere_hat(-1.0)


def test_sphere_hat_phase_splitting():
    r = np.linspace(0.0, 30.0, 3001)
    plus, minus = sphere_hat_components(r)
    rebuilt = np.exp(1j * r) * plus + np.exp(-1j * r) * minus
    assert np.max(np.abs(rebuilt - sphere_hat(r))) < 1e-12
    assert np.max(np.abs(plus) * (1.0 + r)) < 12.0 * np.pi


@pytest.mark.parametrize(
    "t, r, regime",
    [(0.0, 3.0, Regime.STATIC), (10.0, 2.0, Regime.CORE), (10.0, 10.0, Regime.LIGHT_CONE), (10.0, 30.0, Regime.EXTERIOR)],
)
def test_classify_regime(t, r, regime):
    assert classify_regime(t, r) == regime


# ============================================================================
# KERNEL SPEC
# ============================================================================

def test_kernel_spec_rejects_iota_two_off_lump():
    with pytest.raises(ValidationError):
        KernelSpec(k=0, iota=2)


def test_kernel_spec_rejects_decay_power_on_lump():
    with pytest.raises(ValidationError):
        KernelSpec(k=-1, M=1)
    assert KernelSpec(k=-1, iota=2).is_low_frequency


# ============================================================================
# EVALUATION
# ============================================================================

@pytest.mark.parametrize("k", [-1, 0, 2])
def test_static_kernel_matches_mass(k):
    """K(0, 0) = 4 pi int rho^2 profile(rho) d rho."""
    spec = KernelSpec(k=k)
    sample = eval_kernel(spec, 0.0, 0.0)
    assert not sample.flagged
    assert sample.value.real == pytest.approx(static_mass(spec), rel=1e-6)
    assert abs(sample.value.imag) < 1e-9


def test_opposite_sign_gives_conjugate_kernel():
    plus = eval_kernel(KernelSpec(k=0, sign=1), 5.0, 3.0)
    minus = eval_kernel(KernelSpec(k=0, sign=-1), 5.0, 3.0)
    assert abs(plus.value - np.conj(minus.value)) < 1e-8


def test_eval_kernel_rejects_negative_time():
    with pytest.raises(ValueError):
        eval_kernel(KernelSpec(k=0), -1.0, 0.0)


def test_static_envelope_scales_with_shell():
    assert regime_bound(KernelSpec(k=2), 0.0, 0.0) == pytest.approx(2.0 ** 6)
    assert regime_bound(KernelSpec(k=2, iota=1), 0.0, 0.0) == pytest.approx(2.0 ** 4)
    assert regime_bound(KernelSpec(k=0), 10.0, 10.0) == pytest.approx(0.1)


def test_calibration_ratio_is_finite():
    ratio, samples = calibrate_kernel(KernelSpec(k=0), [1.0, 5.0, 20.0])
    assert len(samples) == 9
    assert np.isfinite(ratio) and ratio > 0


# ============================================================================
# DECAY SLOPES
# ============================================================================

def test_light_cone_decay_is_inverse_time():
    spec = KernelSpec(k=0)
    samples = [eval_kernel(spec, t, t) for t in np.geomspace(20.0, 200.0, 12)]
    slope, _, residual = decay_slope_fit(samples, (20.0, 200.0))
    assert slope == pytest.approx(-1.0, abs=0.15)
    assert residual < 0.2


def test_core_decays_faster_than_the_cone():
    """Away from the cone both phases are non-stationary; on top of 1/r the oscillatory integral decays."""
    spec = KernelSpec(k=0)
    samples = [eval_kernel(spec, t, 0.25 * t) for t in np.geomspace(20.0, 200.0, 16)]
    slope, _, _ = decay_slope_fit(samples, (20.0, 200.0))
    assert slope <= -3.0


def test_slope_fit_needs_enough_samples():
    spec = KernelSpec(k=0)
    samples = [eval_kernel(spec, t, t) for t in (20.0, 40.0, 80.0)]
    with pytest.raises(InsufficientSamplesError):
        decay_slope_fit(samples, (10.0, 100.0))


def test_slope_fit_rejects_regime_mix():
    spec = KernelSpec(k=0)
    times = np.geomspace(20.0, 40.0, 8)
    samples = [eval_kernel(spec, t, t if i % 2 else 0.1 * t) for i, t in enumerate(times)]
    with pytest.raises(RegimeMixError):
        decay_slope_fit(samples, (20.0, 40.0))
