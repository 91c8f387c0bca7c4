"""
Unit tests for the dyadic apparatus.
"""
import numpy as np
import pytest

from app.dyadic import (
    PSI,
    ProjectionKind,
    ResolutionError,
    WeightRangeError,
    besov_norm,
    besov_profile,
    interaction_triples,
    littlewood_paley_pieces,
    nonhomogeneous_shell,
    pair_interactions,
    physical_pieces,
    project,
    shell_support,
    smooth_step,
    weighted_bernstein_check,
    weighted_riesz_check,
    weighted_shell_equivalence_check,
)
from app.fields import forward_transform, norm

pytestmark = pytest.mark.unit


# ============================================================================
# CUTOFF PROFILE
# ============================================================================

def test_smooth_step_endpoints():
    values = smooth_step(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]))
    assert values[0] == 0.0 and values[1] == 0.0
    assert values[2] == pytest.approx(0.5)
    assert values[3] == 1.0 and values[4] == 1.0


def test_psi_plateau_and_support():
    assert PSI(np.array([0.0, 1.0, 1.25]))[-1] == 1.0
    assert PSI(1.6) == 0.0
    assert 0.0 < PSI(1.4) < 1.0


def test_nonhomogeneous_shells_partition_unity():
    """psi_{-1} + psi_0 + ... + psi_K telescopes to psi(r / 2^K)."""
    r = np.linspace(0.0, 1.25 * 2.0 ** 6, 2001)
    total = sum(nonhomogeneous_shell(r, k) for k in range(-1, 7))
    assert np.max(np.abs(total - 1.0)) < 1e-14


def test_shell_support_bounds():
    assert shell_support(ProjectionKind.NONHOMOGENEOUS, -1) == (0.0, 0.8)
    low, high = shell_support(ProjectionKind.HOMOGENEOUS, 3)
    assert low == pytest.approx(5.0) and high == pytest.approx(12.8)


# ============================================================================
# PROJECTIONS
# ============================================================================

def test_littlewood_paley_pieces_sum_to_field(gaussian):
    pieces = littlewood_paley_pieces(gaussian)
    total = sum(piece.samples for piece in pieces.values())
    assert np.max(np.abs(total - gaussian.samples)) < 1e-12


def test_physical_pieces_sum_to_field(gaussian):
    pieces = physical_pieces(gaussian)
    total = sum(piece.samples for piece in pieces.values())
    assert np.max(np.abs(total - gaussian.samples)) < 1e-12


def test_projection_spectrum_stays_in_annulus(gaussian, small_grid):
    shell = project(gaussian, ProjectionKind.NONHOMOGENEOUS, 0)
    coefficients = np.abs(forward_transform(shell).coefficients)
    rho = small_grid.frequency_magnitude
    outside = (rho > 1.6) | (rho < 0.625)
    assert coefficients[outside].max() < 1e-12 * coefficients.max()


def test_projection_rejects_unresolved_shell(gaussian):
    with pytest.raises(ResolutionError):
        project(gaussian, ProjectionKind.NONHOMOGENEOUS, 8)


# ============================================================================
# BESOV NORMS
# ============================================================================

def test_besov_b022_is_comparable_to_l2(gaussian):
    """sum_k psi_k^2 lies in [1/2, 1], so the B^0_{2,2} sum sits between ||f|| / sqrt 2 and ||f||."""
    value = besov_norm(gaussian, 0.0, 2.0, 2.0)
    total = norm(gaussian)
    assert 0.5 * total <= value <= total * (1.0 + 1e-12)


def test_besov_profile_flags_truncated_tail(gaussian):
    profile = besov_profile(gaussian, 1.0, 2.0)
    assert profile.shells[0] == -1
    assert profile.tail_fraction > 0
    assert "besov-tail" in profile.flags


def test_besov_norm_rejects_small_exponents(gaussian):
    with pytest.raises(ValueError):
        besov_norm(gaussian, 0.0, 0.5, 2.0)


# ============================================================================
# INTERACTION INDEX SETS
# ============================================================================

def test_interaction_triples_contain_diagonal_and_drop_far_low():
    triples = interaction_triples(10, 16)
    assert (10, 10, 10) in triples
    assert (-1, -1, -1) not in triples
    assert (16, 15, 0) in triples
    assert (16, 5, 0) not in triples


def test_low_shell_sees_every_nearby_triple():
    assert len(interaction_triples(0, 3)) == 5 ** 3


def test_pair_interactions_are_symmetric():
    pairs = set(pair_interactions(2, 10))
    assert all((k2, k1) in pairs for k1, k2 in pairs)
    assert (9, 9) in pairs
    assert (9, -1) not in pairs


def test_index_sets_reject_negative_shell():
    with pytest.raises(ValueError):
        interaction_triples(-2, 5)
    with pytest.raises(ValueError):
        pair_interactions(-2, 5)


# ============================================================================
# WEIGHTED CHECKS
# ============================================================================

def test_weighted_shell_equivalence_is_bounded(gaussian):
    report = weighted_shell_equivalence_check(gaussian, 0.5)
    assert report.valid
    assert len(report.ratios) == 2
    assert report.sup_ratio < 10.0


def test_unweighted_bernstein_constant(gaussian):
    """|grad P_dot_k f| <= 1.6 2^k |P_dot_k f| in L^2 since the shell ends at 1.6 2^k."""
    report = weighted_bernstein_check([gaussian], 0, 0.0)
    assert report.sup_ratio <= 1.6 + 1e-9


def test_unweighted_riesz_is_contractive(gaussian):
    report = weighted_riesz_check([gaussian], 0, 0.0)
    assert len(report.ratios) == 3
    assert report.sup_ratio <= 1.0 + 1e-12


@pytest.mark.parametrize("beta", [1.5, -1.5, 2.0])
def test_weighted_checks_reject_non_a2_weights(gaussian, beta):
    with pytest.raises(WeightRangeError):
        weighted_bernstein_check([gaussian], 0, beta)
    with pytest.raises(WeightRangeError):
        weighted_shell_equivalence_check(gaussian, beta)
