"""Cascaded position/attitude tracking controller.

Outer loop: one scalar kernel per translation axis turns the sliding
variable sigma = (p_d - p) + H*(pd_dot - v) into a desired acceleration;
thrust is the projection of that acceleration onto the current body z axis.
Inner loop: the desired acceleration fixes the desired attitude, and one
kernel per body axis turns the attitude sliding variable into a moment.

Sign conventions differ between the loops as printed in the source
equations: the translation sliding variable is desired-minus-actual while
the attitude one (built from e_R, e_omega) is actual-minus-desired. The
kernels all regulate a desired-minus-actual variable, so the attitude loop
hands them the negated sliding variable; the log keeps the positive-sign
convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import so3
from .kernels import (
    PsmcGains,
    PsmcState,
    PstaGains,
    PstaState,
    SmcGains,
    psmc_step,
    psta_step,
    smc_step,
)
from .plant import ControlInput, QuadParams, RigidBodyState
from .reference import ReferenceSample

E3 = np.array([0.0, 0.0, 1.0])
EPS_ACC = 1e-6
EPS_HEADING = 1e-6


@dataclass(frozen=True)
class AttitudeErrors:
    e_R: np.ndarray
    e_omega: np.ndarray


def attitude_errors(R, R_d, omega, omega_d) -> AttitudeErrors:
    """Rotation error via the vee of the skew part, rate error in body frame."""
    A = R_d.T @ R - R.T @ R_d
    e_R = 0.5 * so3.vee(A)
    e_omega = omega - R.T @ R_d @ omega_d
    return AttitudeErrors(e_R, e_omega)


def desired_attitude(a_desired, psi_d, prev_R_d=None):
    """Attitude whose body z axis carries the desired acceleration.

    Returns (R_d, fallback) where fallback is None or a short tag naming
    which degeneracy was handled: near-zero acceleration holds the previous
    attitude, a heading parallel to the thrust axis swaps to the
    perpendicular heading.
    """
    a = np.asarray(a_desired, dtype=float)
    norm_a = math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
    if norm_a <= EPS_ACC:
        return (prev_R_d if prev_R_d is not None else np.eye(3)), "acc_zero"
    b3 = a / norm_a
    b1 = np.array([math.cos(psi_d), math.sin(psi_d), 0.0])
    c = so3.cross(b3, b1)
    norm_c = math.sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2])
    fallback = None
    if norm_c <= EPS_HEADING:
        b1 = np.array([-math.sin(psi_d), math.cos(psi_d), 0.0])
        c = so3.cross(b3, b1)
        norm_c = math.sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2])
        fallback = "heading"
    b2 = c / norm_c
    R_d = np.column_stack((so3.cross(b2, b3), b2, b3))
    return R_d, fallback


class PstaAxis:
    """Scalar super-twisting kernel with its threaded state."""

    def __init__(self, gains: PstaGains):
        self.gains = gains
        self.state = PstaState()

    @property
    def surface_H(self):
        return self.gains.H

    def step(self, sigma, sigma_rate):
        u, self.state = psta_step(self.gains, self.state, sigma)
        return u

    def reset(self):
        self.state = PstaState()


class PsmcAxis:
    def __init__(self, gains: PsmcGains):
        self.gains = gains
        self.state = PsmcState()

    @property
    def surface_H(self):
        return self.gains.H

    def step(self, sigma, sigma_rate):
        u, self.state = psmc_step(self.gains, self.state, sigma)
        return u

    def reset(self):
        self.state = PsmcState()


class SmcAxis:
    """Boundary-layer SMC baseline.

    The kernel regulates actual-minus-desired, opposite to the sliding
    variable handed in, hence the negations. The surface weight H is kept
    here so the baseline uses the same surface as the kernel it is compared
    against.
    """

    def __init__(self, gains: SmcGains, surface_H: float):
        self.gains = gains
        self._H = surface_H

    @property
    def surface_H(self):
        return self._H

    def step(self, sigma, sigma_rate):
        return smc_step(self.gains, -sigma, -sigma_rate)

    def reset(self):
        pass


_TRANSLATION_AXES = ("x", "y", "z")
_ROTATION_AXES = ("roll", "pitch", "yaw")


def _make_axis(kind, mapping, h):
    m = dict(mapping)
    if kind == "psta":
        return PstaAxis(PstaGains.from_mapping(m, h=h))
    if kind == "psmc":
        return PsmcAxis(PsmcGains.from_mapping(m, h=h))
    if kind == "smc":
        surface_H = float(m.pop("H"))
        return SmcAxis(SmcGains.from_mapping(m, h=h), surface_H)
    raise ValueError(f"unknown controller kind {kind!r}; expected psta, psmc or smc")


@dataclass
class DebugRecord:
    sigma_tran: np.ndarray
    sigma_rot: np.ndarray
    e_R: np.ndarray
    e_omega: np.ndarray
    a_desired: np.ndarray
    R_d: np.ndarray
    fallback: object = None


class CascadeController:
    """Stateful full controller; step it at exactly the configured rate.

    config keys: kind (psta|smc|psmc), translation: {x,y,z: gain mappings},
    rotation: {roll,pitch,yaw: gain mappings}, gravity_feedforward (bool),
    omega_d ("zero" | "rd_diff"), f_max (N, default 2*m*g).
    """

    def __init__(self, params: QuadParams, config, h: float):
        self.params = params
        self.h = h
        cfg = dict(config)
        self.kind = cfg.get("kind", "psta")
        self.gravity_feedforward = bool(cfg.get("gravity_feedforward", True))
        self.omega_d_mode = cfg.get("omega_d", "zero")
        if self.omega_d_mode not in ("zero", "rd_diff"):
            raise ValueError(f"unknown omega_d mode {self.omega_d_mode!r}")
        f_max = cfg.get("f_max")
        self.f_max = float(f_max) if f_max is not None else 2.0 * params.m * params.g

        tr = cfg["translation"]
        rot = cfg["rotation"]
        self.tran_axes = [_make_axis(self.kind, tr[name], h) for name in _TRANSLATION_AXES]
        self.rot_axes = [_make_axis(self.kind, rot[name], h) for name in _ROTATION_AXES]
        self._prev_R_d = np.eye(3)

    def reset(self):
        for ax in self.tran_axes + self.rot_axes:
            ax.reset()
        self._prev_R_d = np.eye(3)

    def update(self, s: RigidBodyState, ref: ReferenceSample):
        p_err = ref.p_d - s.p
        v_err = ref.pd_dot - s.v
        sigma_tran = np.array(
            [p_err[i] + self.tran_axes[i].surface_H * v_err[i] for i in range(3)]
        )
        a_cmd = np.array(
            [self.tran_axes[i].step(sigma_tran[i], v_err[i]) for i in range(3)]
        )
        a_desired = a_cmd + (self.params.g * E3 if self.gravity_feedforward else 0.0)

        f_u = self.params.m * float(a_desired @ (s.R @ E3))
        f_u = min(max(f_u, 0.0), self.f_max)

        R_d, fallback = desired_attitude(a_desired, ref.psi_d, self._prev_R_d)

        if self.omega_d_mode == "rd_diff":
            omega_d = so3.log_so3(self._prev_R_d.T @ R_d) / self.h
        else:
            omega_d = np.zeros(3)
        self._prev_R_d = R_d

        err = attitude_errors(s.R, R_d, s.omega, omega_d)
        sigma_rot = np.array(
            [err.e_R[i] + self.rot_axes[i].surface_H * err.e_omega[i] for i in range(3)]
        )
        J = self.params.J_array()
        M_u = np.array(
            [
                J[i] * self.rot_axes[i].step(-sigma_rot[i], -err.e_omega[i])
                for i in range(3)
            ]
        )

        record = DebugRecord(
            sigma_tran=sigma_tran,
            sigma_rot=sigma_rot,
            e_R=err.e_R,
            e_omega=err.e_omega,
            a_desired=a_desired,
            R_d=R_d,
            fallback=fallback,
        )
        return ControlInput(f_u, M_u), record
