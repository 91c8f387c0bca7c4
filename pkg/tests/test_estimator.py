"""
Unit tests for the constant estimator: families, inequality checks, A_2 characteristic and refinement.
"""
import numpy as np
import pytest
from pydantic import ValidationError

from app.estimator import (
    CubeSet,
    DispersiveVariant,
    Endpoint,
    FamilyError,
    HypothesisError,
    LocalizedVariant,
    a2_constant,
    check_admissible,
    check_dispersive,
    check_localized_linfty,
    check_shell_transport,
    check_strichartz,
    check_weighted_hypotheses,
    check_weighted_l2l2,
    check_weighted_strichartz,
    dual_exponent,
    lp_in_time,
    make_family,
    refinement_gate,
    relative_change,
    time_samples,
)
from app.schemas.family import FamilyProfile, TestFamily
from app.schemas.report import FLAG_EMPTY, FLAG_UNSTABLE, ConstantReport

pytestmark = pytest.mark.unit

SMALL_CUBES = CubeSet(side_exponents=tuple(range(-4, 21, 2)))


@pytest.fixture
def shell_family():
    return TestFamily(profile=FamilyProfile.ANNULAR_SHELL, k=0, count=2, seed=9)


# ============================================================================
# CONSTANT REPORTS
# ============================================================================

def test_report_excludes_zero_samples():
    report = ConstantReport.from_samples("demo", {}, lhs=[0.0, 1.0, 3.0], rhs=[0.0, 2.0, 3.0])
    assert report.excluded_zero == 1
    assert report.ratios == [0.5, 1.0]
    assert report.sup_ratio == 1.0
    assert report.valid


def test_report_without_samples_is_flagged():
    report = ConstantReport.from_samples("demo", {}, lhs=[0.0], rhs=[0.0])
    assert FLAG_EMPTY in report.flags
    assert not report.valid


def test_report_row_is_flat():
    report = ConstantReport.from_samples("demo", {"k": 1}, lhs=[1.0], rhs=[2.0], flags=["wraparound"])
    row = report.to_row()
    assert row["k"] == 1
    assert row["flags"] == "wraparound"
    assert row["samples"] == 1


# ============================================================================
# FAMILIES AND TIME SAMPLING
# ============================================================================

def test_family_is_reproducible(shell_family, small_grid):
    first = make_family(shell_family, small_grid)
    second = make_family(shell_family, small_grid)
    assert len(first) == 2
    assert all(np.array_equal(a.samples, b.samples) for a, b in zip(first, second))


def test_bump_family_carries_certified_support(bump_grid):
    family = TestFamily(profile=FamilyProfile.GAUSSIAN_BUMP, support_radius=2.0, count=3, seed=2)
    members = make_family(family, bump_grid)
    assert all(member.support_radius == 2.0 for member in members)


def test_unresolved_bump_family_is_rejected(small_grid):
    family = TestFamily(profile=FamilyProfile.GAUSSIAN_BUMP, support_radius=0.5)
    with pytest.raises(FamilyError):
        make_family(family, small_grid)


def test_family_validation():
    with pytest.raises(ValidationError):
        TestFamily(profile=FamilyProfile.ANNULAR_SHELL)
    with pytest.raises(ValidationError):
        TestFamily(profile=FamilyProfile.RANDOM_BANDLIMITED, k_lo=2, k_hi=1)


def test_random_bandlimited_members_are_normalized(small_grid):
    from app.fields import norm

    family = TestFamily(profile=FamilyProfile.RANDOM_BANDLIMITED, k_lo=-1, k_hi=0, count=2, seed=1)
    members = make_family(family, small_grid)
    assert all(norm(member) == pytest.approx(1.0) for member in members)


def test_time_samples_grow_with_log_time():
    assert len(time_samples(0, 0.0, 10.0)) > len(time_samples(0, 0.0, 1.0))
    assert len(time_samples(0, 0.0, 1.0, refinement=2)) == 2 * len(time_samples(0, 0.0, 1.0))
    with pytest.raises(ValueError):
        time_samples(0, 2.0, 1.0)


def test_lp_in_time():
    times = np.linspace(0.0, 2.0, 11)
    assert lp_in_time(np.ones(11), times, 2.0) == pytest.approx(np.sqrt(2.0))
    assert lp_in_time(np.arange(11.0), times, np.inf) == 10.0


# ============================================================================
# HYPOTHESES
# ============================================================================

def test_dual_exponent():
    assert dual_exponent(4.0) == pytest.approx(4.0)
    assert dual_exponent(2.0) == np.inf


def test_admissibility():
    check_admissible(4.0, 4.0)
    check_admissible(2.0, np.inf)
    with pytest.raises(HypothesisError):
        check_admissible(3.0, 3.0)


def test_weighted_hypothesis_message_names_the_violated_bound():
    with pytest.raises(HypothesisError, match=r"min\{3β₁/2, 1\}"):
        check_weighted_hypotheses(0.5, 1.0, 4.0, 1)
    assert check_weighted_hypotheses(0.5, 0.6, 4.0, 1) == pytest.approx(4.0)


def test_weighted_item_two_needs_small_p():
    with pytest.raises(HypothesisError):
        check_weighted_hypotheses(0.5, 0.6, 4.0, 2)


def test_endpoint_pair_needs_variant(shell_family, small_grid):
    with pytest.raises(HypothesisError):
        check_strichartz(shell_family, small_grid, 0, 2.0, np.inf)
    with pytest.raises(HypothesisError):
        check_strichartz(shell_family, small_grid, 0, 4.0, 4.0, endpoint=Endpoint.LOG)


# ============================================================================
# INEQUALITY CHECKS
# ============================================================================

def test_dispersive_shell_ratio_is_bounded(shell_family, small_grid):
    report = check_dispersive(shell_family, small_grid, 0, [0.5, 1.0, 2.0])
    assert report.valid
    assert len(report.ratios) == 6
    assert 0 < report.sup_ratio < 50.0


def test_dispersive_low_frequency_variants(small_grid):
    family = TestFamily(profile=FamilyProfile.RANDOM_BANDLIMITED, k_lo=-1, k_hi=-1, count=1, seed=3)
    for variant in (DispersiveVariant.LOW_FREQUENCY, DispersiveVariant.LOW_FREQUENCY_INVERSE):
        report = check_dispersive(family, small_grid, -1, [0.0, 1.0], variant=variant)
        assert report.parameters["variant"] == variant.value
        assert np.isfinite(report.sup_ratio)


def test_strichartz_non_endpoint(shell_family, small_grid):
    report = check_strichartz(shell_family, small_grid, 0, 4.0, 4.0, t=2.0)
    assert report.valid
    assert 0 < report.sup_ratio < 50.0


def test_strichartz_log_endpoint_reports_plain_ratio(shell_family, small_grid):
    report = check_strichartz(shell_family, small_grid, 0, 2.0, np.inf, t=2.0, endpoint=Endpoint.LOG)
    assert report.parameters["endpoint"] == "log"
    assert report.extras["plain_sup"] >= report.sup_ratio


def test_weighted_strichartz_item_one(shell_family, small_grid):
    report = check_weighted_strichartz(shell_family, small_grid, 0, 4.0, 0.5, 0.6, t=2.0)
    assert report.inequality == "weighted-strichartz-1"
    assert np.isfinite(report.sup_ratio)


def test_weighted_l2l2_at_time_zero_is_controlled(shell_family, small_grid):
    """The data terms dominate the weighted norm of the evolution up to a modest factor."""
    report = check_weighted_l2l2(shell_family, small_grid, 0.5, 0.6, 0, [0.0, 1.0, 2.0])
    assert report.valid
    assert report.sup_ratio < 5.0


def test_shell_transport_rejects_time_zero(shell_family, small_grid):
    with pytest.raises(HypothesisError):
        check_shell_transport(shell_family, small_grid, 0.5, 0, [0.0, 1.0])


def test_shell_transport_ratio_is_finite(shell_family, small_grid):
    report = check_shell_transport(shell_family, small_grid, 0.5, 0, [1.0, 2.0])
    assert np.isfinite(report.sup_ratio)


def test_localized_projected_variant(shell_family, small_grid):
    report = check_localized_linfty(shell_family, small_grid, 0, [0.5, 1.0], j=0)
    assert report.parameters["j"] == 0
    assert np.isfinite(report.sup_ratio)


def test_localized_sine_variant_needs_supports(shell_family, small_grid):
    from app.propagators import GeometryError

    with pytest.raises(GeometryError):
        check_localized_linfty(shell_family, small_grid, 0, [1.0], variant=LocalizedVariant.SINE)


def test_localized_rejects_bad_delta(shell_family, small_grid):
    with pytest.raises(HypothesisError):
        check_localized_linfty(shell_family, small_grid, 0, [1.0], delta=0.9)


# ============================================================================
# A_2 WEIGHTS
# ============================================================================

def test_a2_constant_of_constant_weight_is_one():
    assert a2_constant(0.0, SMALL_CUBES) == 1.0
    assert a2_constant(0.0) == 1.0


def test_a2_constant_is_symmetric_in_alpha():
    assert a2_constant(1.5, SMALL_CUBES) == pytest.approx(a2_constant(-1.5, SMALL_CUBES), rel=1e-9)


def test_a2_constant_grows_toward_the_endpoint():
    values = [a2_constant(alpha, SMALL_CUBES) for alpha in (1.0, 2.0, 2.9)]
    assert 1.0 < values[0] < values[1] < values[2]


@pytest.mark.slow
def test_a2_constant_blows_up_at_three():
    """The characteristic near alpha = 3 is several times the one at alpha = 2."""
    assert a2_constant(2.99) >= 4.0 * a2_constant(2.0)


@pytest.mark.slow
def test_a2_constant_at_2_9_is_ten_times_the_one_at_2():
    assert a2_constant(2.9) >= 10.0 * a2_constant(2.0)


# ============================================================================
# REFINEMENT GATE
# ============================================================================

def test_relative_change():
    assert relative_change(1.0, 1.0) == 0.0
    assert relative_change(1.0, 2.0) == pytest.approx(0.5)
    assert relative_change(None, 1.0) == float("inf")


def test_refinement_gate_needs_family_description(shell_family, small_grid):
    members = make_family(shell_family, small_grid)
    with pytest.raises(TypeError):
        refinement_gate(check_dispersive, members, small_grid, k=0, t_grid=[1.0])


def test_refinement_gate_records_refined_sup(shell_family, small_grid):
    report = refinement_gate(check_dispersive, shell_family, small_grid, 0.5, k=0, t_grid=[0.5, 1.0])
    assert report.refined_sup is not None
    assert "refinement_change" in report.extras
    assert FLAG_UNSTABLE not in report.flags


def test_refinement_gate_flags_any_change_with_zero_factor(shell_family, small_grid):
    report = refinement_gate(check_dispersive, shell_family, small_grid, 0.0, k=0, t_grid=[0.5, 1.0])
    if report.extras["refinement_change"] > 0:
        assert FLAG_UNSTABLE in report.flags
