"""
Wave Kernels
------------
Radial evaluation of the frequency-localized half-wave kernels
 - K(t, x) = int_0^inf sigma_hat(rho r) exp(+/- i t rho) rho^(2 - iota) (1 + rho^2)^-M profile(rho) d rho
 - profile = widened shell around 2^k, or psi(rho) for the low-frequency lump
 - regime classification and the decay envelopes per regime
 - log-log decay slope fits over a time window
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from app.core.config import settings
from app.dyadic.cutoff import PSI, widened_shell
from app.kernels.quadrature import panel_quadrature
from app.kernels.sphere import sphere_hat
from app.schemas.kernel import KernelSpec

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

DEFAULT_N_ORDER = 3
MIN_FIT_SAMPLES = 8


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class InsufficientSamplesError(ValueError):
    """Raised when a slope fit has too few usable samples."""
    pass


class RegimeMixError(ValueError):
    """Raised when a slope fit mixes samples from different regimes."""
    pass


# -------------------------------------------------------------------------
# Types
# -------------------------------------------------------------------------
class Regime(str, Enum):
    STATIC = "static"
    CORE = "core"
    LIGHT_CONE = "light-cone"
    EXTERIOR = "exterior"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class KernelSample:
    spec: KernelSpec
    t: float
    r: float
    value: complex
    quadrature_error: float
    regime: Regime
    flagged: bool = False


def classify_regime(t: float, r: float) -> Regime:
    if t == 0:
        return Regime.STATIC
    if r <= t / 2:
        return Regime.CORE
    if r >= 2 * t:
        return Regime.EXTERIOR
    return Regime.LIGHT_CONE


# -------------------------------------------------------------------------
# Profiles
# -------------------------------------------------------------------------
def kernel_profile(spec: KernelSpec):
    """rho -> rho^(2 - iota) (1 + rho^2)^-M times the shell profile."""
    def profile(rho):
        shell = widened_shell(rho, spec.k, homogeneous=spec.homogeneous)
        return rho ** (2 - spec.iota) * (1.0 + rho ** 2) ** (-spec.M) * shell

    return profile


def kernel_breakpoints(spec: KernelSpec) -> np.ndarray:
    """Support ends and the transition ends of the profile."""
    if spec.is_low_frequency:
        return np.array([0.0, PSI.plateau, PSI.support])
    outer = 2.0 ** (spec.k + 1)
    inner = 2.0 ** (spec.k - 2)
    return np.array([PSI.plateau * inner, PSI.support * inner, PSI.plateau * outer, PSI.support * outer])


# -------------------------------------------------------------------------
# Evaluation
# -------------------------------------------------------------------------
def eval_kernel(spec: KernelSpec, t: float, r: float, tol: float | None = None) -> KernelSample:
    """
    Evaluate the kernel at time t and radius r = |x|.

    Args:
        spec: kernel parameters
        t: time >= 0
        r: radius >= 0
        tol: absolute quadrature tolerance (settings.KERNEL_TOLERANCE by default)

    Returns:
        KernelSample, flagged when the tolerance is not reached within the panel budget
    """
    if t < 0 or r < 0:
        raise ValueError(f"kernel evaluation needs t >= 0 and r >= 0, got t={t}, r={r}")
    tol = settings.KERNEL_TOLERANCE if tol is None else tol
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")

    profile = kernel_profile(spec)
    phase = 1j * spec.sign * t

    def integrand(rho):
        return sphere_hat(rho * r) * np.exp(phase * rho) * profile(rho)

    breakpoints = kernel_breakpoints(spec)
    support_width = breakpoints[-1] - breakpoints[0]
    max_width = support_width / 16
    if t + r > 0:
        max_width = min(max_width, np.pi / (4 * (t + r)))

    result = panel_quadrature(integrand, breakpoints, max_width, tol)
    sample = KernelSample(
        spec=spec,
        t=float(t),
        r=float(r),
        value=result.value,
        quadrature_error=result.error_estimate,
        regime=classify_regime(t, r),
        flagged=not result.converged,
    )
    if sample.flagged:
        logger.warning(
            f"Kernel k={spec.k} iota={spec.iota} M={spec.M} at t={t}, r={r}: "
            f"error {result.error_estimate:.2e} above tol {tol:.1e}"
        )
    return sample


def static_mass(spec: KernelSpec, samples: int = 20001) -> float:
    """4 pi int rho^2 profile(rho) d rho by the trapezoid rule (non-oscillatory cross-check)."""
    breakpoints = kernel_breakpoints(spec)
    rho = np.linspace(breakpoints[0], breakpoints[-1], samples)
    return float(4.0 * np.pi * np.trapezoid(kernel_profile(spec)(rho), rho))


# -------------------------------------------------------------------------
# Envelopes
# -------------------------------------------------------------------------
def regime_bound(
    spec: KernelSpec,
    t: float,
    r: float,
    n_order: int = DEFAULT_N_ORDER,
    regime: Regime | None = None,
) -> float:
    """
    Theoretical envelope with unit constant for the regime of (t, r).

    Args:
        spec: kernel parameters
        t, r: time and radius
        n_order: decay order used in the core and exterior regimes
        regime: force a regime (Regime.UNIFORM for the time-decay envelope everywhere)

    Returns:
        float
    """
    regime = classify_regime(t, r) if regime is None else Regime(regime)

    if spec.is_low_frequency:
        if spec.iota == 2:
            return float(np.log(np.e + t) / (1.0 + t))
        if regime == Regime.STATIC:
            return 1.0
        if regime == Regime.UNIFORM:
            return 1.0 / (1.0 + t)
        if regime == Regime.CORE:
            return float(t ** -3.0)
        if regime == Regime.EXTERIOR:
            return float(r ** -3.0)
        return 1.0 / t

    scale = 2.0 ** spec.k
    amplitude = 2.0 ** ((3 - spec.iota) * spec.k - 2 * spec.M * max(spec.k, 0))
    if regime == Regime.STATIC:
        return amplitude
    if regime == Regime.UNIFORM:
        return amplitude / (1.0 + scale * t)
    if regime == Regime.LIGHT_CONE:
        return amplitude / (scale * t)
    return amplitude * (scale * max(t, r)) ** (-n_order)


def calibrate_kernel(
    spec: KernelSpec,
    times: Iterable[float],
    radius_factors: Sequence[float] = (0.25, 1.0, 3.0),
    tol: float | None = None,
) -> tuple[float, list[KernelSample]]:
    """Sup of |K| / uniform envelope over samples r = factor * t; flagged samples are skipped."""
    samples = [eval_kernel(spec, t, factor * t, tol) for t in times for factor in radius_factors]
    ratios = [
        abs(s.value) / regime_bound(spec, s.t, s.r, regime=Regime.UNIFORM)
        for s in samples
        if not s.flagged
    ]
    return (max(ratios) if ratios else float("nan")), samples


# -------------------------------------------------------------------------
# Slope fits
# -------------------------------------------------------------------------
def decay_slope_fit(samples: Sequence[KernelSample], window: tuple[float, float]) -> tuple[float, float, float]:
    """
    Least-squares fit of log|K| against log t inside the window.

    Returns:
        (slope, intercept, rms residual)
    """
    t_lo, t_hi = window
    chosen = [s for s in samples if t_lo <= s.t <= t_hi and s.t > 0 and abs(s.value) > 0]
    if len(chosen) < MIN_FIT_SAMPLES:
        raise InsufficientSamplesError(
            f"need at least {MIN_FIT_SAMPLES} samples in window {window}, got {len(chosen)}"
        )
    regimes = {s.regime for s in chosen}
    if len(regimes) > 1:
        raise RegimeMixError(f"samples span several regimes: {sorted(r.value for r in regimes)}")

    log_t = np.log([s.t for s in chosen])
    log_value = np.log([abs(s.value) for s in chosen])
    slope, intercept = np.polyfit(log_t, log_value, 1)
    residual = float(np.sqrt(np.mean((log_value - (slope * log_t + intercept)) ** 2)))
    return float(slope), float(intercept), residual
