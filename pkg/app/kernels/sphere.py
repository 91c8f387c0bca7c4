"""
Fourier transform of the surface measure of the unit sphere and its phase splitting.
"""

import numpy as np

from app.dyadic.cutoff import smooth_step


def sphere_hat(r) -> np.ndarray:
    """sigma_hat(r) = 4 pi sin(r) / r, equal to 4 pi at r = 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("sphere_hat is defined for r >= 0")
    return 4.0 * np.pi * np.sinc(r / np.pi)


def sphere_hat_components(r) -> tuple[np.ndarray, np.ndarray]:
    """
    Smooth omega_+ and omega_- with sigma_hat(r) = exp(ir) omega_+(r) + exp(-ir) omega_-(r).

    Near the origin both carry half of sigma_hat; from r = 1 on they equal -/+ 2 pi i / r,
    so |omega_pm| (1 + r) stays bounded.
    """
    r = np.asarray(r, dtype=float)
    inner = 1.0 - smooth_step((r - 0.5) / 0.5)
    sigma = sphere_hat(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(r > 0, 2.0 * np.pi / np.where(r > 0, r, 1.0), 0.0)
    omega_plus = inner * np.exp(-1j * r) * sigma / 2.0 - (1.0 - inner) * 1j * tail
    omega_minus = inner * np.exp(1j * r) * sigma / 2.0 + (1.0 - inner) * 1j * tail
    return omega_plus, omega_minus
