"""6-DOF rigid-body quadrotor plant.

World-frame position/velocity, body-frame angular velocity, rotation
body->world. Forces: gravity down, collective thrust along the body z axis,
plus a scripted external wrench (force in world frame, torque in body
frame). The integrator is classical RK4 with the rotation advanced through
the exponential map, so no re-orthonormalization pass is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import so3

E3 = np.array([0.0, 0.0, 1.0])


class IntegrationError(RuntimeError):
    """Raised when the state stops being finite during a step."""


@dataclass(frozen=True)
class QuadParams:
    """Physical constants of the vehicle.

    J holds the three diagonal inertia entries; the model assumes a
    diagonal inertia matrix throughout.
    """

    m: float
    J: tuple
    d: float
    k_b: float
    k_d: float
    g: float = 9.81

    def __post_init__(self):
        if not (self.m > 0.0):
            raise ValueError(f"mass must be positive, got {self.m}")
        J = tuple(float(j) for j in self.J)
        if len(J) != 3 or any(not (j > 0.0) for j in J):
            raise ValueError(f"inertia diagonal must be 3 positive entries, got {self.J}")
        object.__setattr__(self, "J", J)
        for name in ("d", "k_b", "k_d", "g"):
            if not (getattr(self, name) > 0.0):
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_mapping(cls, m):
        d = dict(m)
        d["J"] = tuple(float(j) for j in d["J"])
        return cls(**{k: (v if k == "J" else float(v)) for k, v in d.items()})

    def J_array(self):
        return np.asarray(self.J)


@dataclass
class RigidBodyState:
    p: np.ndarray
    v: np.ndarray
    R: np.ndarray
    omega: np.ndarray

    @classmethod
    def at_rest(cls, p=(0.0, 0.0, 0.0)):
        return cls(
            p=np.asarray(p, dtype=float).copy(),
            v=np.zeros(3),
            R=np.eye(3),
            omega=np.zeros(3),
        )

    def copy(self):
        return RigidBodyState(self.p.copy(), self.v.copy(), self.R.copy(), self.omega.copy())

    def is_finite(self):
        return bool(
            np.all(np.isfinite(self.p))
            and np.all(np.isfinite(self.v))
            and np.all(np.isfinite(self.R))
            and np.all(np.isfinite(self.omega))
        )

    def rotation_defect(self):
        return so3.orthonormality_defect(self.R)

    def validate(self, tol=1e-9):
        if not self.is_finite():
            raise ValueError("state contains non-finite entries")
        if self.rotation_defect() > tol:
            raise ValueError(f"rotation is not orthonormal within {tol}")
        if abs(np.linalg.det(self.R) - 1.0) > tol:
            raise ValueError(f"rotation determinant deviates from 1 beyond {tol}")


@dataclass(frozen=True)
class ControlInput:
    f_u: float
    M_u: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not math.isfinite(self.f_u) or self.f_u < 0.0:
            raise ValueError(f"thrust must be finite and >= 0, got {self.f_u}")
        M = np.asarray(self.M_u, dtype=float)
        if M.shape != (3,) or not np.all(np.isfinite(M)):
            raise ValueError("moment must be a finite 3-vector")
        object.__setattr__(self, "M_u", M)


@dataclass(frozen=True)
class Wrench:
    f_ext: np.ndarray = field(default_factory=lambda: np.zeros(3))
    M_ext: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        f = np.asarray(self.f_ext, dtype=float)
        M = np.asarray(self.M_ext, dtype=float)
        if f.shape != (3,) or M.shape != (3,) or not (np.all(np.isfinite(f)) and np.all(np.isfinite(M))):
            raise ValueError("wrench must be two finite 3-vectors")
        object.__setattr__(self, "f_ext", f)
        object.__setattr__(self, "M_ext", M)


ZERO_WRENCH = Wrench()


def dynamics_deriv(s: RigidBodyState, u: ControlInput, w: Wrench, params: QuadParams):
    """Time derivative of (p, v, R, omega).

    Returns (dp, dv, dR, domega). Thrust acts along R·e3; gravity along -e3;
    the external torque is already in the body frame.
    """
    J = params.J_array()
    dp = s.v.copy()
    dv = (-params.m * params.g * E3 + u.f_u * (s.R @ E3) + w.f_ext) / params.m
    dR = s.R @ so3.hat(s.omega)
    Jw = J * s.omega
    domega = (-so3.cross(s.omega, Jw) + u.M_u + w.M_ext) / J
    return dp, dv, dR, domega


def thrust_moments(omega_rotors, params: QuadParams) -> ControlInput:
    """Collective thrust and body moments from the four rotor speeds."""
    w = np.asarray(omega_rotors, dtype=float)
    if w.shape != (4,):
        raise ValueError("expected 4 rotor speeds")
    if np.any(w < 0.0):
        raise ValueError(f"rotor speeds must be >= 0, got {omega_rotors}")
    sq = w * w
    f_u = params.k_b * sq.sum()
    M = np.array(
        [
            params.k_b * params.d * (sq[3] - sq[1]),
            params.k_b * params.d * (sq[2] - sq[0]),
            params.k_d * (sq[1] + sq[3] - sq[0] - sq[2]),
        ]
    )
    return ControlInput(f_u, M)


def mix_inverse(u: ControlInput, params: QuadParams):
    """Squared rotor speeds realizing the requested input.

    The 4x4 mixing map is inverted in closed form. Negative squared speeds
    are infeasible and get clamped to zero; callers that need the wrench the
    clamped rotors actually deliver should pass the result back through
    thrust_moments.
    """
    a = u.f_u / params.k_b
    b1 = u.M_u[0] / (params.k_b * params.d)
    b2 = u.M_u[1] / (params.k_b * params.d)
    b3 = u.M_u[2] / params.k_d
    s24 = 0.5 * (a + b3)
    s13 = 0.5 * (a - b3)
    sq = np.array(
        [
            0.5 * (s13 - b2),
            0.5 * (s24 - b1),
            0.5 * (s13 + b2),
            0.5 * (s24 + b1),
        ]
    )
    return np.maximum(sq, 0.0)


def apply_actuator_limits(u: ControlInput, params: QuadParams) -> ControlInput:
    """Round-trip the input through the rotor map; clamping may alter it."""
    sq = mix_inverse(u, params)
    return thrust_moments(np.sqrt(sq), params)


def _dexpinv_neg(theta, omega):
    # inverse right-trivialized tangent of exp on SO(3), truncated; the
    # quadratic term is enough to keep the whole step at fourth order
    c1 = so3.cross(theta, omega)
    c2 = so3.cross(theta, c1)
    return omega + 0.5 * c1 + c2 / 12.0


def integrate_step(
    s: RigidBodyState,
    u: ControlInput,
    w_fn,
    params: QuadParams,
    t: float,
    dt: float,
) -> RigidBodyState:
    """One RK4 step of the rigid-body dynamics with input held constant.

    The rotation is advanced as R·exp(hat(Theta)) where Theta accumulates
    the RK4-weighted body rotation vector, so R stays on SO(3) to roundoff
    and needs no re-orthonormalization. ``w_fn(t)`` supplies the external
    wrench at the stage times.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    J = params.J_array()
    m, g = params.m, params.g
    p0, v0, R0, om0 = s.p, s.v, s.R, s.omega

    def stage(theta, p, v, om, ts):
        R = R0 @ so3.exp_so3(theta) if theta is not None else R0
        w = w_fn(ts)
        dv = (-m * g * E3 + u.f_u * (R @ E3) + w.f_ext) / m
        Jw = J * om
        dom = (-so3.cross(om, Jw) + u.M_u + w.M_ext) / J
        dth = om if theta is None else _dexpinv_neg(theta, om)
        return v, dv, dom, dth

    half = 0.5 * dt
    dp1, dv1, dom1, dth1 = stage(None, p0, v0, om0, t)
    dp2, dv2, dom2, dth2 = stage(
        half * dth1, p0 + half * dp1, v0 + half * dv1, om0 + half * dom1, t + half
    )
    dp3, dv3, dom3, dth3 = stage(
        half * dth2, p0 + half * dp2, v0 + half * dv2, om0 + half * dom2, t + half
    )
    dp4, dv4, dom4, dth4 = stage(
        dt * dth3, p0 + dt * dp3, v0 + dt * dv3, om0 + dt * dom3, t + dt
    )

    sixth = dt / 6.0
    p1 = p0 + sixth * (dp1 + 2.0 * dp2 + 2.0 * dp3 + dp4)
    v1 = v0 + sixth * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4)
    om1 = om0 + sixth * (dom1 + 2.0 * dom2 + 2.0 * dom3 + dom4)
    theta = sixth * (dth1 + 2.0 * dth2 + 2.0 * dth3 + dth4)
    R1 = R0 @ so3.exp_so3(theta)

    out = RigidBodyState(p1, v1, R1, om1)
    if not out.is_finite():
        raise IntegrationError(f"state became non-finite during step at t={t}")
    return out
