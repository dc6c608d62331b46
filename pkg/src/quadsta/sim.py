"""Closed-loop simulation driver.

One record per controller tick: the state the controller saw, the
reference, the errors, the commanded inputs, the sliding variables and the
disturbance wrench at that instant. Between ticks the plant integrates with
the input held constant. Everything is evaluated in a fixed order with no
randomness, so identical scenarios reproduce bit-identical logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import so3
from .cascade import CascadeController
from .disturbance import disturbance_at
from .kernels import NonFiniteInputError
from .plant import IntegrationError, apply_actuator_limits, integrate_step
from .reference import reference_at
from .scenario import Scenario

# Position-norm bound beyond which a run is declared divergent.
DIVERGENCE_RADIUS = 1e3


@dataclass
class SimLog:
    """Columnar per-tick record of one run."""

    name: str
    controller: str
    h: float
    t: np.ndarray
    p: np.ndarray
    v: np.ndarray
    quat: np.ndarray
    omega: np.ndarray
    p_d: np.ndarray
    psi_d: np.ndarray
    e_p: np.ndarray
    e_R: np.ndarray
    f_u: np.ndarray
    M_u: np.ndarray
    sigma_tran: np.ndarray
    sigma_rot: np.ndarray
    f_ext: np.ndarray
    M_ext: np.ndarray
    diverged: bool = False

    def __len__(self):
        return self.t.size

    @property
    def duration(self):
        return float(self.t[-1]) if self.t.size else 0.0


def _empty_rows():
    return {
        "t": [], "p": [], "v": [], "quat": [], "omega": [], "p_d": [],
        "psi_d": [], "e_p": [], "e_R": [], "f_u": [], "M_u": [],
        "sigma_tran": [], "sigma_rot": [], "f_ext": [], "M_ext": [],
    }


def _pack(name, controller, h, rows, diverged):
    n = len(rows["t"])

    def arr(key, width):
        data = np.asarray(rows[key], dtype=float)
        if n == 0:
            return data.reshape((0,) if width == 1 else (0, width))
        return data

    return SimLog(
        name=name,
        controller=controller,
        h=h,
        t=arr("t", 1),
        p=arr("p", 3),
        v=arr("v", 3),
        quat=arr("quat", 4),
        omega=arr("omega", 3),
        p_d=arr("p_d", 3),
        psi_d=arr("psi_d", 1),
        e_p=arr("e_p", 3),
        e_R=arr("e_R", 3),
        f_u=arr("f_u", 1),
        M_u=arr("M_u", 3),
        sigma_tran=arr("sigma_tran", 3),
        sigma_rot=arr("sigma_rot", 3),
        f_ext=arr("f_ext", 3),
        M_ext=arr("M_ext", 3),
        diverged=diverged,
    )


def run_scenario(sc: Scenario, controller=None) -> SimLog:
    """Run one scenario to completion or divergence.

    On divergence (position norm beyond DIVERGENCE_RADIUS or a non-finite
    state) the partial log is returned with the diverged flag set instead of
    raising.
    """
    kind = controller or sc.controller
    ctl = CascadeController(sc.params, sc.controller_config(kind), sc.h)

    def w_fn(t):
        return disturbance_at(t, sc.disturbance)

    s = sc.initial.copy()
    rows = _empty_rows()
    n_sub = sc.n_sub
    dt = sc.h / n_sub
    diverged = False

    for k in range(sc.n_ticks + 1):
        t = k * sc.h
        if not s.is_finite() or math.sqrt(float(s.p @ s.p)) > DIVERGENCE_RADIUS:
            diverged = True
            break
        ref = reference_at(t, sc.trajectory)
        w = w_fn(t)
        try:
            u, rec = ctl.update(s, ref)
        except (NonFiniteInputError, AssertionError):
            diverged = True
            break

        rows["t"].append(t)
        rows["p"].append(s.p.copy())
        rows["v"].append(s.v.copy())
        rows["quat"].append(so3.to_quat(s.R))
        rows["omega"].append(s.omega.copy())
        rows["p_d"].append(np.asarray(ref.p_d, dtype=float))
        rows["psi_d"].append(ref.psi_d)
        rows["e_p"].append(s.p - np.asarray(ref.p_d, dtype=float))
        rows["e_R"].append(rec.e_R.copy())
        rows["f_u"].append(u.f_u)
        rows["M_u"].append(u.M_u.copy())
        rows["sigma_tran"].append(rec.sigma_tran.copy())
        rows["sigma_rot"].append(rec.sigma_rot.copy())
        rows["f_ext"].append(w.f_ext.copy())
        rows["M_ext"].append(w.M_ext.copy())

        if k == sc.n_ticks:
            break
        u_plant = apply_actuator_limits(u, sc.params) if sc.actuator_layer else u
        try:
            for j in range(n_sub):
                s = integrate_step(s, u_plant, w_fn, sc.params, t + j * dt, dt)
        except IntegrationError:
            diverged = True
            break

    return _pack(sc.name, kind, sc.h, rows, diverged)
