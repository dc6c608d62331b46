"""Scripted external wrenches: gated sinusoids per channel."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .plant import Wrench

CHANNELS = ("fx", "fy", "fz", "mx", "my", "mz")


@dataclass(frozen=True)
class SinusoidChannel:
    """amplitude*sin(2*pi*freq*t + phase) + offset, active inside the gates.

    An empty gate list means always active. Outside every gate the channel
    contributes exactly zero (offset included), which is how a second-cycle
    disturbance switches on cleanly.
    """

    amplitude: float = 0.0
    freq_hz: float = 0.0
    phase: float = 0.0
    offset: float = 0.0
    gates: tuple = ()

    def __post_init__(self):
        if self.freq_hz < 0.0:
            raise ValueError(f"frequency must be >= 0, got {self.freq_hz}")
        gates = tuple((float(a), float(b)) for a, b in self.gates)
        for a, b in gates:
            if not b > a:
                raise ValueError(f"gate stop must exceed start, got ({a}, {b})")
        object.__setattr__(self, "gates", gates)

    def active(self, t):
        if not self.gates:
            return True
        return any(a <= t < b for a, b in self.gates)

    def value(self, t):
        if not self.active(t):
            return 0.0
        return self.amplitude * math.sin(2.0 * math.pi * self.freq_hz * t + self.phase) + self.offset

    @classmethod
    def from_mapping(cls, m):
        d = dict(m)
        gates = tuple(tuple(g) for g in d.pop("gates", ()))
        return cls(gates=gates, **{k: float(v) for k, v in d.items()})


@dataclass(frozen=True)
class DisturbanceProfile:
    fx: SinusoidChannel = SinusoidChannel()
    fy: SinusoidChannel = SinusoidChannel()
    fz: SinusoidChannel = SinusoidChannel()
    mx: SinusoidChannel = SinusoidChannel()
    my: SinusoidChannel = SinusoidChannel()
    mz: SinusoidChannel = SinusoidChannel()

    @classmethod
    def from_mapping(cls, m):
        m = dict(m or {})
        unknown = set(m) - set(CHANNELS)
        if unknown:
            raise ValueError(f"unknown disturbance channels {sorted(unknown)}")
        return cls(**{k: SinusoidChannel.from_mapping(v) for k, v in m.items()})

    def zeroed(self):
        return DisturbanceProfile()


ZERO_PROFILE = DisturbanceProfile()


def disturbance_at(t: float, profile: DisturbanceProfile) -> Wrench:
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    f = np.array([profile.fx.value(t), profile.fy.value(t), profile.fz.value(t)])
    M = np.array([profile.mx.value(t), profile.my.value(t), profile.mz.value(t)])
    return Wrench(f, M)
