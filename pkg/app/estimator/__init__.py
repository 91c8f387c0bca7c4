"""
Constant estimation for the linear estimates: test families, inequality checks with ratio
statistics, the A_2 characteristic and the refinement gate.
"""

from app.estimator.a2_weights import CubeSet, a2_constant, cube_integrals
from app.estimator.dispersive import DispersiveVariant, check_dispersive, window_flags
from app.estimator.families import FamilyError, gaussian_bump, make_family, resolve_members
from app.estimator.l2l2 import check_shell_transport, check_weighted_l2l2
from app.estimator.localized import LocalizedVariant, check_localized_linfty
from app.estimator.refinement import refinement_gate, relative_change
from app.estimator.spacetime import ShellEvolution, lp_in_time, spacetime_norm, time_samples
from app.estimator.strichartz import (
    Endpoint,
    HypothesisError,
    check_admissible,
    check_strichartz,
    check_weighted_hypotheses,
    check_weighted_strichartz,
    dual_exponent,
)

__all__ = [
    "CubeSet",
    "a2_constant",
    "cube_integrals",
    "DispersiveVariant",
    "check_dispersive",
    "window_flags",
    "FamilyError",
    "gaussian_bump",
    "make_family",
    "resolve_members",
    "check_shell_transport",
    "check_weighted_l2l2",
    "LocalizedVariant",
    "check_localized_linfty",
    "refinement_gate",
    "relative_change",
    "ShellEvolution",
    "lp_in_time",
    "spacetime_norm",
    "time_samples",
    "Endpoint",
    "HypothesisError",
    "check_admissible",
    "check_strichartz",
    "check_weighted_hypotheses",
    "check_weighted_strichartz",
    "dual_exponent",
]
