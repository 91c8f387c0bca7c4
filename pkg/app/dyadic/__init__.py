"""
Dyadic apparatus: cutoff profile, frequency projections, physical cutoffs, Besov norms,
interaction index sets and weighted shell checks.
"""

from app.dyadic.cutoff import (
    PSI,
    CutoffProfile,
    ProjectionKind,
    homogeneous_shell,
    nonhomogeneous_shell,
    shell_profile,
    shell_support,
    smooth_step,
    widened_shell,
)
from app.dyadic.projections import (
    BesovProfile,
    ResolutionError,
    besov_norm,
    besov_profile,
    check_resolvable,
    frequency_symbol,
    littlewood_paley_pieces,
    physical_cutoff,
    physical_pieces,
    project,
    top_shell,
)
from app.dyadic.triples import interaction_triples, pair_interactions
from app.dyadic.weighted import (
    WeightRangeError,
    weighted_bernstein_check,
    weighted_riesz_check,
    weighted_shell_equivalence_check,
)

__all__ = [
    "PSI",
    "CutoffProfile",
    "ProjectionKind",
    "homogeneous_shell",
    "nonhomogeneous_shell",
    "shell_profile",
    "shell_support",
    "smooth_step",
    "widened_shell",
    "BesovProfile",
    "ResolutionError",
    "besov_norm",
    "besov_profile",
    "check_resolvable",
    "frequency_symbol",
    "littlewood_paley_pieces",
    "physical_cutoff",
    "physical_pieces",
    "project",
    "top_shell",
    "interaction_triples",
    "pair_interactions",
    "WeightRangeError",
    "weighted_bernstein_check",
    "weighted_riesz_check",
    "weighted_shell_equivalence_check",
]
