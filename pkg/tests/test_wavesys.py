"""
Unit tests for the cubic wave-system solver: coefficient tensors, presets, nonlinearity, stepping,
diagnostics, initial data, scattering data and lifespan tables.
"""
import numpy as np
import pytest

from app.fields import WraparoundError, from_function, zeros
from app.wavesys import (
    COLUMNS,
    AliasingError,
    CFLError,
    DataProfile,
    DiagnosticParameters,
    FixedPointError,
    InitialDataError,
    PRESET_NAMES,
    PresetError,
    ScatteringError,
    State,
    SymmetryError,
    SystemSpec,
    accumulators_nondecreasing,
    energy_norm,
    eval_nonlinearity,
    evolve,
    free_data_residual,
    lifespan_table,
    linear_limit_ratio,
    linear_spec,
    make_initial_data,
    make_preset,
    max_time_step,
    reformulated_nonlinearity,
    scattering_profile,
    sphere_coefficients,
    step,
    symmetrized,
    tensor_shape,
    validity_window,
)
from app.wavesys.initial_data import tail_profile, unit_profile_function

pytestmark = pytest.mark.unit


@pytest.fixture
def small_gaussian_state(small_grid):
    """u = 0.1 exp(-|x|^2 / 2) at rest."""
    u = from_function(small_grid, lambda x, y, z: 0.1 * np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    return State(t=0.0, u=(u,), v=(zeros(small_grid),))


@pytest.fixture
def unit_data(small_grid):
    return make_initial_data(small_grid, DataProfile.GAUSSIAN, epsilon=1.0, seed=5)


# ============================================================================
# SYSTEM COEFFICIENTS
# ============================================================================

def test_tensor_shapes():
    assert tensor_shape("Q1", 2) == (4, 4, 4, 4, 2, 2, 2, 2)
    assert tensor_shape("S3", 1) == (4, 1, 1, 1, 1)


def test_asymmetric_quasilinear_tensor_is_rejected():
    q3 = np.zeros(tensor_shape("Q3", 1))
    q3[0, 1, 0, 0, 0, 0] = 1.0
    with pytest.raises(SymmetryError):
        SystemSpec(speeds=(1.0,), Q3=q3)
    SystemSpec(speeds=(1.0,), Q3=symmetrized("Q3", q3))


def test_latin_asymmetry_is_rejected():
    q3 = np.zeros(tensor_shape("Q3", 2))
    q3[1, 1, 0, 1, 0, 0] = 1.0
    with pytest.raises(SymmetryError, match="i <-> j"):
        SystemSpec(speeds=(1.0, 1.0), Q3=q3)


def test_speeds_and_shapes_are_validated():
    with pytest.raises(SymmetryError):
        SystemSpec(speeds=(0.0,))
    with pytest.raises(SymmetryError):
        SystemSpec(speeds=(1.0,), S3=np.zeros((4, 2, 2, 2, 2)))


def test_linear_spec():
    spec = linear_spec((1.0, 2.0))
    assert spec.is_linear
    assert spec.m == 2
    assert spec.max_speed == 2.0


def test_canonicalized_moves_time_block_to_laplacian():
    spec = make_preset("maxwell-scalar").spec
    assert spec.has_time_second_derivatives
    canonical = spec.canonicalized()
    assert not canonical.has_time_second_derivatives
    for p in (1, 2, 3):
        assert canonical.Q1[p, p, 0, 0, 0, 0, 0, 0] == pytest.approx(-1.0)


# ============================================================================
# PRESETS
# ============================================================================

def test_every_preset_builds():
    for name in PRESET_NAMES:
        params = {"alpha": 1.0, "beta": 2.0} if name == "liquid-crystal" else {}
        preset = make_preset(name, params)
        assert preset.spec.name == name
        assert preset.truncation


def test_unknown_preset():
    with pytest.raises(PresetError, match="Unknown preset"):
        make_preset("euler")


def test_liquid_crystal_parameters():
    with pytest.raises(PresetError):
        make_preset("liquid-crystal", {"alpha": 1.0, "beta": 1.0})
    with pytest.raises(PresetError):
        make_preset("liquid-crystal", {"alpha": 1.0})
    assert make_preset("liquid-crystal", {"alpha": 1.5, "beta": 2.0}).spec.speeds == (1.5,)


def test_membranes_are_pure_cubic():
    assert make_preset("relativistic-membrane").spec.is_pure_cubic
    assert make_preset("nonlinear-membrane").spec.is_pure_cubic
    assert not make_preset("wave-maps-cubic").spec.is_pure_cubic


def test_wave_maps_default_coefficients():
    preset = make_preset("wave-maps-cubic")
    assert preset.spec.m == 2
    C = sphere_coefficients(2)
    assert C[0, 0, 0, 0] == -1.0
    assert C[0, 1, 1, 0] == -1.0
    assert C[0, 0, 1, 0] == 0.0
    assert C[1, 0, 0, 1] == -1.0


def test_wave_maps_rejects_bad_coefficients():
    with pytest.raises(PresetError):
        make_preset("wave-maps-cubic", {"C": np.zeros((2, 2, 2))})
    with pytest.raises(PresetError):
        make_preset("wave-maps-cubic", {"m": 3, "C": np.zeros((2, 2, 2, 2))})


# ============================================================================
# NONLINEARITY
# ============================================================================

def test_linear_system_has_zero_nonlinearity(small_gaussian_state):
    values = eval_nonlinearity(linear_spec(), small_gaussian_state)
    assert np.all(values[0].samples == 0)


def test_membrane_nonlinearity_matches_closed_form(small_gaussian_state, small_grid):
    """For u = e exp(-r^2/2) at rest: |grad u|^2 Lap u - u_i u_j u_ij = -2 r^2 u^3."""
    spec = make_preset("nonlinear-membrane").spec
    rest = (zeros(small_grid),)
    values = eval_nonlinearity(spec, small_gaussian_state, acceleration=rest, dealias=False)
    u = np.real(small_gaussian_state.u[0].samples)
    expected = -2.0 * small_grid.radius ** 2 * u ** 3
    np.testing.assert_allclose(np.real(values[0].samples), expected, atol=1e-8)


def test_dense_and_sparse_evaluations_agree(small_grid):
    spec = make_preset("relativistic-membrane").spec
    u = from_function(small_grid, lambda x, y, z: 0.1 * np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    v = from_function(small_grid, lambda x, y, z: 0.05 * x * np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    state = State(t=0.0, u=(u,), v=(v,))
    sparse = np.real(eval_nonlinearity(spec, state, dealias=False)[0].samples)
    dense = reformulated_nonlinearity(spec, state)[0]
    np.testing.assert_allclose(sparse, dense, atol=1e-12 * max(1.0, np.abs(dense).max()))


def test_large_data_leave_the_fixed_point_regime(small_grid):
    spec = make_preset("nonlinear-membrane").spec
    u = from_function(small_grid, lambda x, y, z: 2.0 * np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
    with pytest.raises(FixedPointError):
        eval_nonlinearity(spec, State(t=0.0, u=(u,), v=(zeros(small_grid),)))


def test_unresolved_state_is_rejected(small_grid):
    xi = 20 * small_grid.frequency_step
    u = from_function(small_grid, lambda x, y, z: 0.01 * np.cos(xi * x) + 0 * y * z)
    state = State(t=0.0, u=(u,), v=(zeros(small_grid),))
    with pytest.raises(AliasingError):
        eval_nonlinearity(make_preset("nonlinear-membrane").spec, state)


def test_component_count_must_match(small_gaussian_state):
    with pytest.raises(ValueError):
        eval_nonlinearity(make_preset("wave-maps-cubic").spec, small_gaussian_state)


# ============================================================================
# TIME STEPPING
# ============================================================================

def test_cfl_limit(small_gaussian_state, small_grid):
    spec = linear_spec()
    limit = max_time_step(spec, small_grid)
    assert limit == pytest.approx(0.5 * small_grid.spacing)
    with pytest.raises(CFLError):
        step(spec, small_gaussian_state, 1.01 * limit)
    with pytest.raises(CFLError):
        step(spec, small_gaussian_state, 0.0)


def test_linear_step_is_reversible(small_gaussian_state, small_grid):
    spec = linear_spec()
    dt = max_time_step(spec, small_grid)
    forward = step(spec, small_gaussian_state, dt)
    back = step(spec, forward, -dt)
    assert back.t == pytest.approx(0.0)
    np.testing.assert_allclose(back.u_array(), small_gaussian_state.u_array(), atol=1e-12)


def test_linear_step_conserves_energy(small_gaussian_state, small_grid):
    spec = linear_spec()
    after = step(spec, small_gaussian_state, max_time_step(spec, small_grid))
    assert energy_norm(spec, after) == pytest.approx(energy_norm(spec, small_gaussian_state), rel=1e-10)


def test_zero_forcing_matches_unforced_step(small_gaussian_state, small_grid):
    spec = make_preset("nonlinear-membrane").spec
    dt = max_time_step(spec, small_grid)
    plain = step(spec, small_gaussian_state, dt)
    forced = step(spec, small_gaussian_state, dt, forcing=lambda t: (zeros(small_grid),))
    np.testing.assert_allclose(forced.u_array(), plain.u_array(), atol=1e-15)


# ============================================================================
# DIAGNOSTICS
# ============================================================================

def test_diagnostic_parameters():
    params = DiagnosticParameters(mu=0.5)
    assert params.bootstrap_delta == pytest.approx(5e-7)
    assert params.decay_exponent == pytest.approx(0.45)
    with pytest.raises(ValueError):
        DiagnosticParameters(delta=0.4)
    with pytest.raises(ValueError):
        DiagnosticParameters(mu=1.0)


def test_linear_evolution_trace(unit_data):
    spec = linear_spec()
    trace = evolve(spec, unit_data.state(), 1.0, 0.5)
    frame = trace.to_frame()
    assert list(frame.columns) == list(COLUMNS)
    assert len(frame) == 3
    np.testing.assert_allclose(frame["energy"], frame["energy"].iloc[0], rtol=1e-10)
    assert accumulators_nondecreasing(trace)
    assert trace.final_state.t == pytest.approx(1.0)


def test_evolve_rejects_bad_horizon(unit_data):
    with pytest.raises(ValueError):
        evolve(linear_spec(), unit_data.state(), 0.0, 0.5)


def test_validity_window_of_certified_data(bump_grid):
    data = make_initial_data(bump_grid, DataProfile.COMPACT_BUMP, epsilon=0.01, support_radius=2.5)
    spec = linear_spec()
    assert validity_window(spec, data.state(), margin=0.5) == pytest.approx(1.0)
    with pytest.raises(WraparoundError):
        evolve(spec, data.state(), 2.0, 0.5)


# ============================================================================
# INITIAL DATA
# ============================================================================

def test_gaussian_data_hit_the_requested_smallness(small_grid):
    data = make_initial_data(small_grid, "gaussian", epsilon=0.05, seed=3, m=2)
    assert len(data.u0) == 2
    assert data.norms["smallness"] == pytest.approx(0.05)
    assert data.norms["sobolev_sum"] == pytest.approx(0.05)


def test_initial_data_are_linear_in_epsilon(small_grid):
    small = make_initial_data(small_grid, "gaussian", epsilon=0.1, seed=3)
    large = make_initial_data(small_grid, "gaussian", epsilon=0.2, seed=3)
    np.testing.assert_allclose(2.0 * np.real(small.u0[0].samples), np.real(large.u0[0].samples), rtol=1e-12)


def test_weighted_tail_profile():
    r = np.array([0.0, 2.0, 3.0, 5.5, 6.0])
    values = tail_profile(r, 2.0, 2.25, 6.0)
    np.testing.assert_allclose(values[:3], (1.0 + (r[:3] / 2.0) ** 2) ** -1.125)
    assert np.all(values[3:] == 0.0)
    u0, u1 = unit_profile_function("weighted-tail", 0.5, 2.0, 6.0)
    assert u1(4.0) < u0(4.0)
    with pytest.raises(InitialDataError):
        unit_profile_function("gaussian", 0.5, 2.0, 6.0)


def test_unresolved_compact_bump(small_grid):
    with pytest.raises(InitialDataError):
        make_initial_data(small_grid, "compact-bump", epsilon=0.1, support_radius=1.0)


def test_negative_epsilon(small_grid):
    with pytest.raises(InitialDataError):
        make_initial_data(small_grid, "gaussian", epsilon=-1.0)


# ============================================================================
# SCATTERING AND LIFESPAN
# ============================================================================

def test_scattering_data_reproduce_the_final_state(small_grid):
    spec = make_preset("nonlinear-membrane").spec
    data = make_initial_data(small_grid, "gaussian", epsilon=0.05, seed=1)
    trace = evolve(spec, data.state(), 1.0, 0.5)
    profile = scattering_profile(trace)
    assert profile.metric[-1] == 0.0
    assert profile.metric[0] > 0.0
    assert free_data_residual(trace, profile) <= 1e-5 * profile.metric[0] + 1e-14


def test_scattering_metric_decreases_after_the_transient(small_grid):
    spec = make_preset("nonlinear-membrane").spec
    data = make_initial_data(small_grid, "gaussian", epsilon=0.01, seed=1)
    trace = evolve(spec, data.state(), 1.0, 0.02, params=DiagnosticParameters(order=1))
    profile = scattering_profile(trace)
    start = 0.79
    assert profile.nonincreasing_after(start)
    at_start = profile.metric[profile.times >= start][0]
    assert profile.metric[-2] <= 0.2 * at_start


def test_scattering_needs_accumulators(unit_data):
    trace = evolve(linear_spec(), unit_data.state(), 0.5, 0.5, scattering=False)
    with pytest.raises(ScatteringError):
        scattering_profile(trace)


def test_lifespan_grid_must_descend(unit_data):
    with pytest.raises(ValueError):
        lifespan_table(linear_spec(), unit_data.u0, unit_data.u1, [0.1, 0.2], 1.0, 0.5)


def test_lifespan_zero_data_is_capped(unit_data):
    table = lifespan_table(linear_spec(), unit_data.u0, unit_data.u1, [0.0], 1.0, 0.5)
    assert table[0].capped
    assert table[0].reason == "zero-data"


def test_lifespan_records_fixed_point_failure(unit_data):
    spec = make_preset("nonlinear-membrane").spec
    table = lifespan_table(spec, unit_data.u0, unit_data.u1, [500.0], 1.0, 0.5)
    assert table[0].reason == "fixed-point"
    assert not table[0].capped
    assert table[0].t_proxy == 0.0


@pytest.mark.slow
def test_lifespan_does_not_shrink_with_the_amplitude(unit_data):
    spec = make_preset("liquid-crystal", {"alpha": 1.0, "beta": 2.0}).spec
    epsilons = [0.4, 0.3, 0.2, 0.1]
    table = lifespan_table(
        spec, unit_data.u0, unit_data.u1, epsilons, 1.0, 0.25,
        blowup_threshold=1.01, params=DiagnosticParameters(order=2),
    )
    assert [entry.epsilon for entry in table] == epsilons
    proxies = [entry.t_proxy for entry in table]
    assert all(later >= earlier for earlier, later in zip(proxies, proxies[1:]))


def test_linear_limit_ratio_rejects_nonpositive_epsilon(unit_data):
    with pytest.raises(ValueError):
        linear_limit_ratio(linear_spec(), unit_data.u0, unit_data.u1, 0.5, 0.0)


@pytest.mark.slow
def test_cubic_linear_limit_ratio(unit_data):
    """Halving the amplitude divides the nonlinear correction by about 8."""
    spec = make_preset("nonlinear-membrane").spec
    ratio, far, near = linear_limit_ratio(spec, unit_data.u0, unit_data.u1, 0.5, 0.2)
    assert far > near > 0
    assert 7.0 < ratio < 9.0
