"""
Smooth radial cutoff psi and the dyadic shell profiles built from it.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

PLATEAU_RADIUS = 5.0 / 4.0
SUPPORT_RADIUS = 8.0 / 5.0


def smooth_step(tau: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for tau <= 0, 1 for tau >= 1, glued from exp(-1/t)."""
    tau = np.clip(np.asarray(tau, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        rise = np.where(tau > 0.0, np.exp(-1.0 / np.where(tau > 0.0, tau, 1.0)), 0.0)
        fall = np.where(tau < 1.0, np.exp(-1.0 / np.where(tau < 1.0, 1.0 - tau, 1.0)), 0.0)
    return rise / (rise + fall)


@dataclass(frozen=True)
class CutoffProfile:
    """Even cutoff with psi = 1 on [-plateau, plateau] and psi = 0 outside [-support, support]."""

    plateau: float = PLATEAU_RADIUS
    support: float = SUPPORT_RADIUS

    def __call__(self, r) -> np.ndarray:
        tau = (np.abs(np.asarray(r, dtype=float)) - self.plateau) / (self.support - self.plateau)
        return 1.0 - smooth_step(tau)

    def derivative_bounds(self, order: int = 3, samples: int = 20001) -> list[float]:
        """Numerical sup |psi^(m)| for m = 0..order on the transition interval."""
        r = np.linspace(self.plateau, self.support, samples)
        values = self(r)
        bounds = [float(np.max(np.abs(values)))]
        for _ in range(order):
            values = np.gradient(values, r)
            bounds.append(float(np.max(np.abs(values))))
        return bounds


PSI = CutoffProfile()


class ProjectionKind(str, Enum):
    NONHOMOGENEOUS = "nonhomogeneous"
    HOMOGENEOUS = "homogeneous"
    WIDENED = "widened"
    HOMOGENEOUS_WIDENED = "homogeneous-widened"


def homogeneous_shell(r, k: int, psi: CutoffProfile = PSI) -> np.ndarray:
    """psi_dot_k(r) = psi(r / 2^k) - psi(r / 2^(k-1))."""
    r = np.abs(np.asarray(r, dtype=float))
    return psi(r / 2.0 ** k) - psi(r / 2.0 ** (k - 1))


def nonhomogeneous_shell(r, k: int, psi: CutoffProfile = PSI) -> np.ndarray:
    """psi_k = psi_dot_k for k >= 0 and psi_{-1}(r) = psi(2r)."""
    if k == -1:
        return psi(2.0 * np.abs(np.asarray(r, dtype=float)))
    return homogeneous_shell(r, k, psi)


def widened_shell(r, k: int, psi: CutoffProfile = PSI, homogeneous: bool = False) -> np.ndarray:
    """Three adjacent shells around k; the k = -1 lump is psi_{-1} + psi_0 = psi."""
    r = np.abs(np.asarray(r, dtype=float))
    if k == -1 and not homogeneous:
        return psi(r)
    return psi(r / 2.0 ** (k + 1)) - psi(r / 2.0 ** (k - 2))


def shell_profile(kind: ProjectionKind, k: int, psi: CutoffProfile = PSI):
    """Radial profile r -> value for a projection kind."""
    kind = ProjectionKind(kind)
    if kind == ProjectionKind.NONHOMOGENEOUS:
        return lambda r: nonhomogeneous_shell(r, k, psi)
    if kind == ProjectionKind.HOMOGENEOUS:
        return lambda r: homogeneous_shell(r, k, psi)
    if kind == ProjectionKind.WIDENED:
        return lambda r: widened_shell(r, k, psi)
    return lambda r: widened_shell(r, k, psi, homogeneous=True)


def shell_support(kind: ProjectionKind, k: int, psi: CutoffProfile = PSI) -> tuple[float, float]:
    """Radial interval outside of which the profile vanishes."""
    kind = ProjectionKind(kind)
    if kind == ProjectionKind.NONHOMOGENEOUS and k == -1:
        return 0.0, psi.support / 2.0
    if kind in (ProjectionKind.NONHOMOGENEOUS, ProjectionKind.HOMOGENEOUS):
        return psi.plateau * 2.0 ** (k - 1), psi.support * 2.0 ** k
    if kind == ProjectionKind.WIDENED and k == -1:
        return 0.0, psi.support
    return psi.plateau * 2.0 ** (k - 2), psi.support * 2.0 ** (k + 1)
