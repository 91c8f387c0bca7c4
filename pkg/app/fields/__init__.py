"""
Field core: periodic grid, fields, transforms, multipliers and norms.
"""

from app.fields.grid import Grid3, GridError, WraparoundError, make_grid, wraparound_check
from app.fields.field import (
    ScalarField,
    SpectralField,
    SupportError,
    certify_support,
    from_function,
    measured_support_radius,
    zeros,
)
from app.fields.transforms import (
    MultiplierError,
    apply_radial_multiplier,
    apply_symbol,
    dealias_mask,
    forward_transform,
    gradient,
    inverse_transform,
    laplacian,
    radial_symbol,
    riesz_symbol,
    riesz_transform,
    singular_origin_value,
    spectral_derivative,
)
from app.fields.norms import (
    NormError,
    japanese_bracket,
    lattice_lp,
    norm,
    sobolev_norm,
    spacetime_weight,
    spectral_l2_norm,
)

__all__ = [
    "Grid3",
    "GridError",
    "WraparoundError",
    "make_grid",
    "wraparound_check",
    "ScalarField",
    "SpectralField",
    "SupportError",
    "certify_support",
    "from_function",
    "measured_support_radius",
    "zeros",
    "MultiplierError",
    "apply_radial_multiplier",
    "apply_symbol",
    "dealias_mask",
    "forward_transform",
    "gradient",
    "inverse_transform",
    "laplacian",
    "radial_symbol",
    "riesz_symbol",
    "riesz_transform",
    "singular_origin_value",
    "spectral_derivative",
    "NormError",
    "japanese_bracket",
    "lattice_lp",
    "norm",
    "sobolev_norm",
    "spacetime_weight",
    "spectral_l2_norm",
]
