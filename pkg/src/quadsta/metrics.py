"""Tracking and smoothness metrics over a simulation log.

The evaluation window defaults to everything after the first 20% of the
run, which drops the reaching transient. The chattering index is the total
variation of each moment channel over the final quarter of the run; a
square wave of amplitude a flipped N times scores exactly 2aN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sim import SimLog


@dataclass(frozen=True)
class MetricsReport:
    rmse: tuple
    max_abs: tuple
    rpe: float
    chattering: tuple
    settling_time: float
    window: tuple

    def as_items(self):
        """Ordered key=value pairs for the machine-readable report block."""
        t0, t1 = self.window
        items = []
        for axis, value in zip("xyz", self.rmse):
            items.append((f"rmse_{axis}", value))
        for axis, value in zip("xyz", self.max_abs):
            items.append((f"max_{axis}", value))
        items.append(("rpe", self.rpe))
        for axis, value in zip("xyz", self.chattering):
            items.append((f"chatter_m{axis}", value))
        items.append(("settling_time", self.settling_time))
        items.append(("window_start", t0))
        items.append(("window_end", t1))
        return items


def settling_time(log: SimLog, band_fraction=0.05) -> float:
    """First time after which the position error norm stays inside the band.

    The band is band_fraction of the peak error norm over the whole run.
    Returns the final time if the error never stays inside, and the start
    time for an identically zero error.
    """
    if len(log) == 0:
        raise ValueError("empty log")
    norms = np.sqrt((log.e_p ** 2).sum(axis=1))
    band = band_fraction * float(norms.max())
    inside = norms <= band
    if not inside[-1]:
        return float(log.t[-1])
    outside = np.nonzero(~inside)[0]
    if outside.size == 0:
        return float(log.t[0])
    return float(log.t[outside[-1] + 1])


def compute_metrics(log: SimLog, window=None) -> MetricsReport:
    """Metrics over (t0, t1]; window defaults to t > 20% of the duration."""
    if len(log) == 0:
        raise ValueError("empty log")
    t_end = float(log.t[-1])
    if window is None:
        window = (0.2 * t_end, t_end)
    t0, t1 = float(window[0]), float(window[1])
    mask = (log.t > t0) & (log.t <= t1)
    if not mask.any():
        raise ValueError(f"no samples in metrics window ({t0}, {t1}]")

    e = log.e_p[mask]
    rmse = tuple(float(x) for x in np.sqrt((e ** 2).mean(axis=0)))
    max_abs = tuple(float(x) for x in np.abs(e).max(axis=0))
    rpe = float(np.sqrt((e ** 2).sum(axis=1)).mean())

    t_start = float(log.t[0])
    tail = log.t >= t_end - 0.25 * (t_end - t_start)
    dM = np.diff(log.M_u[tail], axis=0)
    chattering = tuple(float(x) for x in np.abs(dM).sum(axis=0)) if dM.size else (0.0, 0.0, 0.0)

    return MetricsReport(
        rmse=rmse,
        max_abs=max_abs,
        rpe=rpe,
        chattering=chattering,
        settling_time=settling_time(log),
        window=(t0, t1),
    )
