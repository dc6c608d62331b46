"""Reference trajectory generators.

Each generator maps time to a :class:`ReferenceSample` with the position
and its exact analytic derivative; nothing here finite-differences. The
sampled-table kind interpolates linearly and differentiates the
interpolant, which keeps the derivative consistent with the position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ReferenceSample:
    p_d: np.ndarray
    pd_dot: np.ndarray
    psi_d: float = 0.0
    psi_d_dot: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.p_d, dtype=float)
        v = np.asarray(self.pd_dot, dtype=float)
        if p.shape != (3,) or v.shape != (3,):
            raise ValueError("reference position and velocity must be 3-vectors")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(v))
                and math.isfinite(self.psi_d) and math.isfinite(self.psi_d_dot)):
            raise ValueError("reference sample must be finite")
        object.__setattr__(self, "p_d", p)
        object.__setattr__(self, "pd_dot", v)


class Trajectory:
    """Base class; subclasses implement sample(t)."""

    def sample(self, t: float) -> ReferenceSample:
        raise NotImplementedError


@dataclass(frozen=True)
class CircleTrajectory(Trajectory):
    radius: float = 1.0
    freq_hz: float = 0.1
    center: tuple = (0.0, 0.0)
    z: float = 0.0
    psi_d: float = 0.0

    def sample(self, t):
        w = TWO_PI * self.freq_hz
        cx, cy = self.center
        p = np.array([cx + self.radius * math.cos(w * t),
                      cy + self.radius * math.sin(w * t),
                      self.z])
        v = np.array([-self.radius * w * math.sin(w * t),
                      self.radius * w * math.cos(w * t),
                      0.0])
        return ReferenceSample(p, v, self.psi_d)


@dataclass(frozen=True)
class EllipseTrajectory(Trajectory):
    """Per-axis harmonic path: center + cos_amp*cos(wt) + sin_amp*sin(wt)."""

    center: tuple = (0.0, 0.0, 0.0)
    cos_amp: tuple = (0.0, 0.0, 0.0)
    sin_amp: tuple = (0.0, 0.0, 0.0)
    freq_hz: float = 0.2
    psi_d: float = 0.0

    def sample(self, t):
        w = TWO_PI * self.freq_hz
        c, s = math.cos(w * t), math.sin(w * t)
        ctr = np.asarray(self.center, dtype=float)
        ca = np.asarray(self.cos_amp, dtype=float)
        sa = np.asarray(self.sin_amp, dtype=float)
        p = ctr + ca * c + sa * s
        v = -ca * w * s + sa * w * c
        return ReferenceSample(p, v, self.psi_d)


@dataclass(frozen=True)
class SetpointTrajectory(Trajectory):
    position: tuple = (0.0, 0.0, 0.0)
    psi_d: float = 0.0

    def sample(self, t):
        return ReferenceSample(np.asarray(self.position, dtype=float), np.zeros(3), self.psi_d)


@dataclass(frozen=True)
class TableTrajectory(Trajectory):
    """Piecewise-linear interpolation of sampled waypoints; held beyond ends."""

    times: tuple = ()
    positions: tuple = ()
    psi_d: float = 0.0

    def __post_init__(self):
        t = tuple(float(x) for x in self.times)
        if len(t) < 2 or any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("table needs >= 2 strictly increasing times")
        pos = tuple(tuple(float(c) for c in row) for row in self.positions)
        if len(pos) != len(t) or any(len(row) != 3 for row in pos):
            raise ValueError("positions must be one 3-vector per time")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", pos)

    def sample(self, t):
        ts = self.times
        if t <= ts[0]:
            return ReferenceSample(np.asarray(self.positions[0]), np.zeros(3), self.psi_d)
        if t >= ts[-1]:
            return ReferenceSample(np.asarray(self.positions[-1]), np.zeros(3), self.psi_d)
        import bisect

        i = bisect.bisect_right(ts, t) - 1
        t0, t1 = ts[i], ts[i + 1]
        p0 = np.asarray(self.positions[i])
        p1 = np.asarray(self.positions[i + 1])
        slope = (p1 - p0) / (t1 - t0)
        return ReferenceSample(p0 + slope * (t - t0), slope, self.psi_d)


_KINDS = {
    "circle": CircleTrajectory,
    "ellipse": EllipseTrajectory,
    "setpoint": SetpointTrajectory,
    "table": TableTrajectory,
}


def trajectory_from_mapping(m) -> Trajectory:
    d = dict(m)
    kind = d.pop("kind", None)
    if kind not in _KINDS:
        raise ValueError(f"unknown trajectory kind {kind!r}; expected one of {sorted(_KINDS)}")
    cls = _KINDS[kind]
    try:
        return cls(**{k: (tuple(map(tuple, v)) if k == "positions" else
                          tuple(v) if isinstance(v, (list, tuple)) else float(v))
                      for k, v in d.items()})
    except TypeError as e:
        raise ValueError(f"bad {kind} trajectory config: {e}") from None


def reference_at(t: float, traj: Trajectory) -> ReferenceSample:
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    return traj.sample(t)
