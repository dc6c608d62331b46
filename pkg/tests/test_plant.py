"""Unit tests for the rigid-body plant, rotor mixing and integrator."""

from __future__ import annotations

import math

import numpy as np
import pytest

from quadsta import so3
from quadsta.plant import (
    ControlInput,
    IntegrationError,
    QuadParams,
    RigidBodyState,
    Wrench,
    ZERO_WRENCH,
    apply_actuator_limits,
    dynamics_deriv,
    integrate_step,
    mix_inverse,
    thrust_moments,
)

PARAMS = QuadParams(m=3.81, J=(0.1, 0.1, 0.1), d=0.17, k_b=1e-5, k_d=1e-6)


def _zero_wrench_fn(t):
    return ZERO_WRENCH


def test_params_reject_nonpositive_entries():
    with pytest.raises(ValueError):
        QuadParams(m=0.0, J=(0.1, 0.1, 0.1), d=0.17, k_b=1e-5, k_d=1e-6)
    with pytest.raises(ValueError):
        QuadParams(m=1.0, J=(0.1, -0.1, 0.1), d=0.17, k_b=1e-5, k_d=1e-6)
    with pytest.raises(ValueError):
        QuadParams(m=1.0, J=(0.1, 0.1), d=0.17, k_b=1e-5, k_d=1e-6)


def test_control_input_rejects_negative_thrust():
    with pytest.raises(ValueError):
        ControlInput(-1.0)
    with pytest.raises(ValueError):
        ControlInput(math.nan)


def test_hover_force_balance():
    s = RigidBodyState.at_rest()
    u = ControlInput(PARAMS.m * PARAMS.g)
    dp, dv, dR, domega = dynamics_deriv(s, u, ZERO_WRENCH, PARAMS)
    np.testing.assert_array_equal(dp, np.zeros(3))
    np.testing.assert_array_equal(dv, np.zeros(3))
    np.testing.assert_array_equal(domega, np.zeros(3))


def test_free_fall_acceleration():
    s = RigidBodyState.at_rest()
    _, dv, _, _ = dynamics_deriv(s, ControlInput(0.0), ZERO_WRENCH, PARAMS)
    np.testing.assert_allclose(dv, [0.0, 0.0, -9.81], atol=1e-15)


def test_lateral_force_acceleration():
    # hover thrust cancels gravity; a 10 N side force accelerates at f/m
    s = RigidBodyState.at_rest()
    u = ControlInput(PARAMS.m * PARAMS.g)
    w = Wrench(f_ext=np.array([10.0, 0.0, 0.0]))
    _, dv, _, _ = dynamics_deriv(s, u, w, PARAMS)
    np.testing.assert_allclose(dv, [10.0 / 3.81, 0.0, 0.0], atol=1e-15)


def test_hover_is_a_fixed_point_of_the_integrator():
    s = RigidBodyState.at_rest(p=(1.0, 2.0, 3.0))
    u = ControlInput(PARAMS.m * PARAMS.g)
    for k in range(1000):
        s = integrate_step(s, u, _zero_wrench_fn, PARAMS, k * 1e-3, 1e-3)
    np.testing.assert_allclose(s.p, [1.0, 2.0, 3.0], atol=1e-12)
    np.testing.assert_allclose(s.v, np.zeros(3), atol=1e-12)
    np.testing.assert_allclose(s.R, np.eye(3), atol=1e-12)


def test_free_fall_is_integrated_exactly():
    # polynomial dynamics of degree <= 3 are exact under RK4
    s = RigidBodyState.at_rest()
    dt, n = 1e-2, 100
    for k in range(n):
        s = integrate_step(s, ControlInput(0.0), _zero_wrench_fn, PARAMS, k * dt, dt)
    T = n * dt
    assert s.v[2] == pytest.approx(-PARAMS.g * T, rel=1e-14)
    assert s.p[2] == pytest.approx(-0.5 * PARAMS.g * T * T, rel=1e-13)


def test_pure_z_spin_keeps_rate_and_rotates_about_z():
    w = 2.0
    s = RigidBodyState(
        p=np.zeros(3), v=np.zeros(3), R=np.eye(3), omega=np.array([0.0, 0.0, w])
    )
    u = ControlInput(PARAMS.m * PARAMS.g)
    dt, n = 1e-3, 500
    for k in range(n):
        s = integrate_step(s, u, _zero_wrench_fn, PARAMS, k * dt, dt)
    np.testing.assert_allclose(s.omega, [0.0, 0.0, w], atol=1e-12)
    np.testing.assert_allclose(s.R, so3.rot_z(w * n * dt), atol=1e-11)


def test_torque_free_tumble_conserves_momentum_and_energy():
    params = QuadParams(m=1.0, J=(0.05, 0.08, 0.12), d=0.17, k_b=1e-5, k_d=1e-6)
    s = RigidBodyState(
        p=np.zeros(3), v=np.zeros(3), R=np.eye(3), omega=np.array([3.0, -2.0, 1.5])
    )
    J = params.J_array()
    L0 = np.linalg.norm(s.R @ (J * s.omega))
    E0 = 0.5 * float(s.omega @ (J * s.omega))
    u = ControlInput(params.m * params.g)
    dt, n = 1e-3, 2000
    for k in range(n):
        s = integrate_step(s, u, _zero_wrench_fn, params, k * dt, dt)
    L1 = np.linalg.norm(s.R @ (J * s.omega))
    E1 = 0.5 * float(s.omega @ (J * s.omega))
    # spec bound: drift <= 1e-8 per step
    assert abs(L1 - L0) <= 1e-8 * n
    assert abs(E1 - E0) <= 1e-8 * n
    assert s.rotation_defect() < 1e-11


def test_integrator_is_fourth_order():
    # Richardson: error against a fine reference should shrink ~16x per halving
    params = QuadParams(m=1.0, J=(0.05, 0.08, 0.12), d=0.17, k_b=1e-5, k_d=1e-6)
    s0 = RigidBodyState(
        p=np.zeros(3),
        v=np.array([0.5, -0.2, 0.1]),
        R=so3.exp_so3(np.array([0.2, -0.1, 0.3])),
        omega=np.array([2.0, -3.0, 1.0]),
    )
    u = ControlInput(8.0, np.array([0.01, -0.02, 0.005]))

    def wrench(t):
        return Wrench(f_ext=np.array([math.sin(t), 0.0, math.cos(t)]))

    def final_state(dt):
        s = s0.copy()
        n = int(round(1.0 / dt))
        for k in range(n):
            s = integrate_step(s, u, wrench, params, k * dt, dt)
        return s

    ref = final_state(1e-4)

    def err(s):
        return max(
            float(np.abs(s.p - ref.p).max()),
            float(np.abs(s.v - ref.v).max()),
            float(np.abs(s.R - ref.R).max()),
            float(np.abs(s.omega - ref.omega).max()),
        )

    e_coarse = err(final_state(2e-2))
    e_fine = err(final_state(1e-2))
    ratio = e_coarse / e_fine
    assert 10.0 < ratio < 25.0


def test_rotation_stays_orthonormal_over_long_run():
    s = RigidBodyState(
        p=np.zeros(3), v=np.zeros(3), R=np.eye(3), omega=np.array([1.0, 2.0, -1.5])
    )
    u = ControlInput(PARAMS.m * PARAMS.g, np.array([0.002, -0.001, 0.001]))
    dt = 1e-3
    for k in range(20000):
        s = integrate_step(s, u, _zero_wrench_fn, PARAMS, k * dt, dt)
    assert s.rotation_defect() <= 1e-9


def test_integrator_rejects_bad_dt_and_nonfinite_states():
    s = RigidBodyState.at_rest()
    with pytest.raises(ValueError):
        integrate_step(s, ControlInput(1.0), _zero_wrench_fn, PARAMS, 0.0, 0.0)
    bad = RigidBodyState(
        p=np.array([math.nan, 0.0, 0.0]), v=np.zeros(3), R=np.eye(3), omega=np.zeros(3)
    )
    with pytest.raises(IntegrationError):
        integrate_step(bad, ControlInput(1.0), _zero_wrench_fn, PARAMS, 0.0, 1e-3)


def test_thrust_moments_frozen_example():
    params = QuadParams(m=1.0, J=(0.1, 0.1, 0.1), d=0.17, k_b=1.0, k_d=0.1)
    u = thrust_moments(np.sqrt([1.0, 1.0, 1.0, 4.0]), params)
    assert u.f_u == pytest.approx(7.0, abs=1e-15)
    np.testing.assert_allclose(u.M_u, [0.51, 0.0, 0.3], atol=1e-15)


def test_thrust_moments_symmetry_and_zero():
    params = QuadParams(m=1.0, J=(0.1, 0.1, 0.1), d=0.17, k_b=2.0, k_d=0.1)
    u = thrust_moments([3.0, 3.0, 3.0, 3.0], params)
    assert u.f_u == pytest.approx(4 * 2.0 * 9.0)
    np.testing.assert_array_equal(u.M_u, np.zeros(3))
    u0 = thrust_moments(np.zeros(4), params)
    assert u0.f_u == 0.0
    with pytest.raises(ValueError):
        thrust_moments([1.0, -1.0, 1.0, 1.0], params)


def test_mixing_roundtrip_on_feasible_inputs():
    rng = np.random.default_rng(11)
    for _ in range(100):
        sq = rng.uniform(0.1, 100.0, size=4)
        u = thrust_moments(np.sqrt(sq), PARAMS)
        back = mix_inverse(u, PARAMS)
        np.testing.assert_allclose(back, sq, rtol=1e-12)


def test_mix_inverse_uniform_hover():
    params = QuadParams(m=1.0, J=(0.1, 0.1, 0.1), d=0.17, k_b=2.0, k_d=0.1)
    sq = mix_inverse(ControlInput(4 * params.k_b), params)
    np.testing.assert_allclose(sq, np.ones(4), rtol=1e-12)


def test_infeasible_moment_is_clamped():
    # rolling moment beyond f_u*d/2 demands a negative squared speed
    u = ControlInput(1e-4, np.array([1.0, 0.0, 0.0]))
    sq = mix_inverse(u, PARAMS)
    assert np.all(sq >= 0.0)
    assert np.any(sq == 0.0)
    realized = apply_actuator_limits(u, PARAMS)
    assert realized.f_u != pytest.approx(u.f_u)
    assert abs(realized.M_u[0]) < abs(u.M_u[0])


def test_actuator_limits_identity_on_feasible_input():
    u = ControlInput(PARAMS.m * PARAMS.g, np.array([0.05, -0.03, 0.01]))
    realized = apply_actuator_limits(u, PARAMS)
    assert realized.f_u == pytest.approx(u.f_u, rel=1e-12)
    np.testing.assert_allclose(realized.M_u, u.M_u, rtol=1e-10, atol=1e-15)
