"""
Linear propagators, the Kirchhoff point oracle and the strong-Huygens shell machinery.
"""

from app.propagators.huygens import (
    HuygensShell,
    annulus_mask,
    huygens_cutoff,
    huygens_residual,
    huygens_shell_profile,
    lattice_point,
    point_agreement,
)
from app.propagators.kirchhoff import (
    GeometryError,
    SplineSampler,
    kirchhoff_point_eval,
    spherical_mean,
    trigonometric_point_value,
)
from app.propagators.linear import (
    cosine_prop,
    cosine_symbol,
    duhamel_solution,
    free_wave,
    half_wave,
    half_wave_symbol,
    sine_prop,
    sine_symbol,
    wave_energy,
)

__all__ = [
    "HuygensShell",
    "annulus_mask",
    "huygens_cutoff",
    "huygens_residual",
    "huygens_shell_profile",
    "lattice_point",
    "point_agreement",
    "GeometryError",
    "SplineSampler",
    "kirchhoff_point_eval",
    "spherical_mean",
    "trigonometric_point_value",
    "cosine_prop",
    "cosine_symbol",
    "duhamel_solution",
    "free_wave",
    "half_wave",
    "half_wave_symbol",
    "sine_prop",
    "sine_symbol",
    "wave_energy",
]
