"""Coupled viscous solver: quadrature oracles, fixed point, classification."""

import numpy as np
import pytest

import swirlsolve as sw
from swirlsolve.errors import (
    BlowUpError,
    DomainError,
    MaxIterationsError,
    QuadratureOverflowError,
    SolverFailure,
)
from swirlsolve.viscous import SolverGrid, SwirlForcing, viscous_residuals


def wide_grid(n=2049, x_max=1.0 - 1e-10):
    return SolverGrid.build(x_max, n).xi


def test_grid_round_trip():
    grid = SolverGrid.build(0.999, 512)
    again = SolverGrid.from_xi(grid.xi)
    assert np.allclose(again.s, grid.s, rtol=1e-12, atol=1e-12)
    assert np.array_equal(again.xi, grid.xi)


# ---------------------------------------------------------------------------
# G quadrature


def test_compute_G_zero_swirl():
    xi = wide_grid(513, x_max=0.999)
    assert np.all(sw.compute_G(xi, np.zeros_like(xi), np.array([0.0, 1.0, 5.0])) == 0.0)


def test_compute_G_constant_swirl_oracle():
    # constant V collapses the nested integral to (V^2/2)*phi exactly
    xi = SolverGrid.build(sw.xi_to_x(120.0), 2048).xi
    probe = np.geomspace(0.01, 100.0, 64)
    for v0 in (0.5, 1.0, 2.0):
        got = sw.compute_G(xi, np.full_like(xi, v0), probe)
        want = 0.5 * v0**2 * sw.phi(probe)
        assert np.max(np.abs(got / want - 1.0)) < 1e-8


def test_compute_G_spot_value():
    xi = SolverGrid.build(0.999, 1024).xi
    got = sw.compute_G(xi, np.full_like(xi, 2.0), 1.0)
    assert got == pytest.approx(0.8284271247461900976, rel=1e-10)


def test_compute_G_vanishes_at_origin():
    xi = SolverGrid.build(0.999, 512).xi
    rng = np.random.default_rng(3)
    v = np.abs(rng.normal(1.0, 0.2, xi.size))
    assert sw.compute_G(xi, v, 0.0) == 0.0


def test_compute_G_validation():
    xi = SolverGrid.build(0.999, 512).xi
    v = np.ones_like(xi)
    with pytest.raises(DomainError):
        sw.compute_G(xi, np.where(xi > 1, np.inf, v), 1.0)
    with pytest.raises(DomainError):
        sw.compute_G(xi, v, 1e9)  # beyond the sampled range
    with pytest.raises(DomainError):
        sw.compute_G(xi[::-1], v, 1.0)


# ---------------------------------------------------------------------------
# swirl transport quadrature


def test_solve_V_zero_theta_oracle():
    xi = wide_grid()
    v = sw.solve_V_given_theta(xi, np.zeros_like(xi), nu=1.0, v_inf=1.0)
    assert np.max(np.abs(v - xi / np.hypot(1.0, xi))) < 1e-8


def test_solve_V_zero_far_field():
    xi = wide_grid(513)
    v = sw.solve_V_given_theta(xi, np.zeros_like(xi), nu=1.0, v_inf=0.0)
    assert np.all(v == 0.0)


def test_solve_V_nu_independent_when_theta_vanishes():
    xi = wide_grid(513)
    a = sw.solve_V_given_theta(xi, np.zeros_like(xi), nu=1.0, v_inf=2.0)
    b = sw.solve_V_given_theta(xi, np.zeros_like(xi), nu=2.0, v_inf=2.0)
    assert np.max(np.abs(a - b)) < 1e-13


def test_solve_V_boundary_anchors():
    xi = SolverGrid.build(0.999, 777).xi
    theta = -0.3 * xi / (1.0 + xi)
    v = sw.solve_V_given_theta(xi, theta, nu=0.7, v_inf=1.5)
    assert v[0] == 0.0
    assert v[-1] == pytest.approx(1.5, abs=1e-15)
    assert np.all(np.diff(v) > 0.0)  # positive normalization keeps V monotone


def test_solve_V_plane_override():
    xi = SolverGrid.build(0.999, 513).xi
    v = sw.solve_V_given_theta(xi, np.zeros_like(xi), nu=1.0, v_inf=1.0, v0=0.25)
    assert v[0] == 0.25
    assert v[-1] == pytest.approx(1.0, abs=1e-15)


def test_solve_V_overflow_guard():
    xi = SolverGrid.build(0.999, 513).xi
    theta = np.full_like(xi, 5.0)
    with pytest.raises(QuadratureOverflowError):
        sw.solve_V_given_theta(xi, theta, nu=1e-12, v_inf=1.0)


def test_solve_V_rejects_nonpositive_nu():
    xi = SolverGrid.build(0.999, 513).xi
    with pytest.raises(DomainError):
        sw.solve_V_given_theta(xi, np.zeros_like(xi), nu=0.0, v_inf=1.0)


# ---------------------------------------------------------------------------
# theta integration


def test_solve_theta_rest_state():
    xi = SolverGrid.build(0.999, 513).xi
    params = sw.FlowParameters(nu=1.0, v_swirl=0.0, e0=0.0)
    theta, theta_prime, theta_bar = sw.solve_theta_given_V(
        xi, np.zeros_like(xi), params
    )
    assert np.max(np.abs(theta)) < 1e-12
    assert np.max(np.abs(theta_prime)) < 1e-12
    assert np.max(np.abs(theta_bar)) < 1e-12


def test_solve_theta_origin_slope_forced_zero(viscous_111):
    # the balance itself forces theta'(0) = 0 because G and phi vanish there
    assert abs(viscous_111.theta_prime[0]) < 1e-8
    assert viscous_111.theta[0] == 0.0


def test_solve_theta_blowup_detection():
    config = sw.SolverConfig(n_grid=512)
    params = sw.FlowParameters(nu=0.01, v_swirl=0.0, e0=-50.0)
    xi = SolverGrid.build(config.x_max, config.n_grid).xi
    with pytest.raises(BlowUpError) as info:
        sw.solve_theta_given_V(xi, np.zeros_like(xi), params, config)
    assert 0.0 < info.value.x_escape < config.x_max


def test_solve_theta_compact_vs_direct():
    """The compact-coordinate integration matches a direct-xi integration."""
    config = sw.SolverConfig(n_grid=1024, ode_tol=1e-12)
    params = sw.FlowParameters(nu=1.0, v_swirl=1.0, e0=1.0)
    xi = SolverGrid.build(0.999, config.n_grid).xi
    v = np.ones_like(xi)
    th_c, _, _ = sw.solve_theta_given_V(xi, v, params, config, coordinate="compact")
    th_d, _, _ = sw.solve_theta_given_V(xi, v, params, config, coordinate="direct")
    assert np.max(np.abs(th_c - th_d)) < 1e-8


# ---------------------------------------------------------------------------
# coupled fixed point


def test_picard_rest_state_single_sweep():
    params = sw.FlowParameters(nu=1.0, v_swirl=0.0, e0=0.0)
    prof = sw.picard_solve(params, sw.SolverConfig(n_grid=256))
    assert prof.convergence["iterations"] == 1
    assert np.max(np.abs(prof.theta)) == 0.0
    assert np.max(np.abs(prof.v)) == 0.0
    assert np.max(np.abs(prof.p)) == 0.0


def test_picard_converged_profile(viscous_111):
    conv = viscous_111.convergence
    assert conv["residual_2_5a"] < 1e-6
    assert conv["residual_2_5b"] < 1e-6
    assert conv["blowup"] is None
    assert viscous_111.theta[0] == 0.0
    assert abs(viscous_111.v[0]) < 1e-12
    assert abs(viscous_111.v[-1] - 1.0) < 1e-6
    assert abs(viscous_111.p[0] - 1.0) < 1e-12


def test_picard_residuals_recomputable(viscous_111):
    res_a, res_b = viscous_residuals(viscous_111)
    assert np.max(np.abs(res_a)) == viscous_111.convergence["residual_2_5a"]
    assert np.max(np.abs(res_b)) == viscous_111.convergence["residual_2_5b"]


def test_picard_damping_invariance(viscous_111):
    params = sw.FlowParameters(nu=1.0, v_swirl=1.0, e0=1.0)
    config = sw.SolverConfig(damping=1.0)
    undamped = sw.picard_solve(params, config)
    sup = np.max(np.abs(undamped.theta - viscous_111.theta))
    assert sup < 10.0 * config.picard_tol


def test_picard_deterministic():
    params = sw.FlowParameters(nu=0.5, v_swirl=1.0, e0=0.5)
    config = sw.SolverConfig(n_grid=512)
    a = sw.picard_solve(params, config)
    b = sw.picard_solve(params, config)
    assert np.array_equal(a.theta, b.theta)
    assert np.array_equal(a.v, b.v)
    assert np.array_equal(a.p, b.p)
    assert a.convergence == b.convergence


def test_picard_large_nu_swirl_limit():
    # with nu >> 1 theta barely stirs, so V approaches the zero-theta form
    params = sw.FlowParameters(nu=1e3, v_swirl=1.0, e0=1.0)
    prof = sw.picard_solve(params, sw.SolverConfig(n_grid=1024))
    oracle = sw.solve_V_given_theta(prof.grid, np.zeros_like(prof.grid), 1e3, 1.0)
    assert np.max(np.abs(prof.v - oracle)) < 1e-3


def test_picard_iteration_cap():
    params = sw.FlowParameters(nu=1.0, v_swirl=1.0, e0=1.0)
    with pytest.raises(MaxIterationsError) as info:
        sw.picard_solve(params, sw.SolverConfig(n_grid=256, max_iters=2))
    assert len(info.value.history) == 2


def test_picard_stiff_failure_is_controlled():
    params = sw.FlowParameters(nu=1e-9, v_swirl=1.0, e0=1.0)
    config = sw.SolverConfig(n_grid=256, max_steps=5000)
    with pytest.raises(SolverFailure):
        sw.picard_solve(params, config)


def test_picard_rejects_inviscid():
    with pytest.raises(DomainError):
        sw.picard_solve(sw.FlowParameters(nu=0.0, v_swirl=1.0, e0=1.0))


# ---------------------------------------------------------------------------
# regime classification and sweeps


def test_classify_euler_branches(euler_branch_pos, euler_branch_neg):
    assert sw.classify_regime(euler_branch_pos) is sw.RegimeLabel.INWARD_UPWARD
    assert sw.classify_regime(euler_branch_neg) is sw.RegimeLabel.OUTWARD_DOWNWARD


def test_classify_rest_state_indeterminate(rest_profile):
    assert sw.classify_regime(rest_profile) is sw.RegimeLabel.INDETERMINATE


def test_sweep_single_rest_point():
    records = sw.parameter_sweep([1.0], [0.0], [0.0], sw.SolverConfig(n_grid=256))
    assert len(records) == 1
    rec = records[0]
    assert rec.converged
    assert rec.regime == "Indeterminate"
    assert rec.iters == 1


def test_sweep_mixed_grid_records_failures():
    config = sw.SolverConfig(n_grid=512)
    records = sw.parameter_sweep([0.1, 1.0], [-2.0, 2.0], [-1.0, 1.0], config)
    assert len(records) == 8
    # deterministic lexicographic order
    assert [r.nu for r in records] == [0.1] * 4 + [1.0] * 4
    for rec in records:
        if rec.converged:
            # coarse sweep grid: residuals report discretization honestly
            assert rec.res_a < 1e-3 and rec.res_b < 1e-3
        else:
            assert rec.failure != ""
    # the +-v_inf symmetry: swirl enters the coupling only through V^2
    by_key = {(r.nu, r.v_inf, r.e0): r for r in records}
    for nu in (0.1, 1.0):
        for e0 in (-1.0, 1.0):
            assert by_key[(nu, -2.0, e0)].regime == by_key[(nu, 2.0, e0)].regime


def test_sweep_csv_shape():
    records = sw.parameter_sweep([1.0], [0.0, 1.0], [0.0], sw.SolverConfig(n_grid=256))
    text = sw.sweep_to_csv(records)
    lines = text.strip().split("\n")
    assert lines[0] == "nu,v_inf,e0,converged,regime,iters,res_a,res_b"
    assert len(lines) == 3
    assert lines[1].startswith("1,0,0,true,Indeterminate,1,")
