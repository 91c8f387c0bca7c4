"""
Cubic quasilinear wave systems: coefficient tensors, presets, pseudo-spectral solver and diagnostics.
"""

from app.wavesys.system import State, SymmetryError, SystemSpec, linear_spec, symmetrized, tensor_shape
from app.wavesys.presets import PRESET_NAMES, ModelPreset, PresetError, make_preset, sphere_coefficients
from app.wavesys.nonlinearity import (
    AliasingError,
    FixedPointError,
    eval_nonlinearity,
    quasilinear_coefficients,
    reformulated_nonlinearity,
    semilinear_terms,
)
from app.wavesys.integrator import CFLError, FreeFlow, Stepper, max_time_step, step
from app.wavesys.diagnostics import (
    COLUMNS,
    DiagnosticParameters,
    DiagnosticsTrace,
    accumulators_nondecreasing,
    energy_norm,
    evolve,
    validity_window,
)
from app.wavesys.initial_data import DataProfile, InitialData, InitialDataError, make_initial_data
from app.wavesys.scattering import ScatteringError, ScatteringProfile, free_data_residual, scattering_profile
from app.wavesys.lifespan import LifespanEntry, lifespan_table, linear_limit_ratio

__all__ = [
    "State",
    "SymmetryError",
    "SystemSpec",
    "linear_spec",
    "symmetrized",
    "tensor_shape",
    "PRESET_NAMES",
    "ModelPreset",
    "PresetError",
    "make_preset",
    "sphere_coefficients",
    "AliasingError",
    "FixedPointError",
    "eval_nonlinearity",
    "quasilinear_coefficients",
    "reformulated_nonlinearity",
    "semilinear_terms",
    "CFLError",
    "FreeFlow",
    "Stepper",
    "max_time_step",
    "step",
    "COLUMNS",
    "DiagnosticParameters",
    "DiagnosticsTrace",
    "accumulators_nondecreasing",
    "energy_norm",
    "evolve",
    "validity_window",
    "DataProfile",
    "InitialData",
    "InitialDataError",
    "make_initial_data",
    "ScatteringError",
    "ScatteringProfile",
    "free_data_residual",
    "scattering_profile",
    "LifespanEntry",
    "lifespan_table",
    "linear_limit_ratio",
]
