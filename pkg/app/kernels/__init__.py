"""
Oscillatory wave kernels: sphere transform, panel quadrature, regime envelopes and slope fits.
"""

from app.kernels.kernel import (
    InsufficientSamplesError,
    KernelSample,
    Regime,
    RegimeMixError,
    calibrate_kernel,
    classify_regime,
    decay_slope_fit,
    eval_kernel,
    kernel_profile,
    regime_bound,
    static_mass,
)
from app.kernels.quadrature import QuadratureResult, panel_quadrature
from app.kernels.sphere import sphere_hat, sphere_hat_components

__all__ = [
    "InsufficientSamplesError",
    "KernelSample",
    "Regime",
    "RegimeMixError",
    "calibrate_kernel",
    "classify_regime",
    "decay_slope_fit",
    "eval_kernel",
    "kernel_profile",
    "regime_bound",
    "static_mass",
    "QuadratureResult",
    "panel_quadrature",
    "sphere_hat",
    "sphere_hat_components",
]
