"""Figure builders, one per kind, plus the render entry point.

Everything is drawn under the packaged style file with the Agg backend and a
pinned PNG Software tag, so rendering the same CSV with the same spec gives
the same bytes, byte for byte, on every run.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import PlotSpec, Run  # noqa: E402

STYLE_FILE = resources.files("quadplots") / "quadplots.mplstyle"
# one dashed neutral style for every reference trace
REF_STYLE = {"color": "0.3", "linestyle": "--", "linewidth": 1.0}
PNG_METADATA = {"Software": "quadplots"}

_AXES = ("x", "y", "z")


def _overlay(ax, runs, values, ylabel):
    for run, v in zip(runs, values):
        ax.plot(run.t, v, label=run.label)
    ax.set_ylabel(ylabel)


def fig_tracking(runs: list[Run]):
    """Position and yaw responses against the reference, with error norm."""
    fig, axes = plt.subplots(4, 1, sharex=True)
    ref = runs[0]
    for i in range(3):
        _overlay(axes[i], runs, [r.p[:, i] for r in runs], f"{_AXES[i]} [m]")
        axes[i].plot(ref.t, ref.p_d[:, i], **REF_STYLE,
                     label="reference" if i == 0 else None)
    axes[0].legend(loc="upper right", ncols=len(runs) + 1)

    ax = axes[3]
    _overlay(ax, runs, [r.rpy[:, 2] for r in runs], "yaw [rad]")
    ax.plot(ref.t, ref.psi_d, **REF_STYLE)
    err = ax.twinx()
    for run in runs:
        err.plot(run.t, run.rpe, linewidth=0.8, alpha=0.55)
    err.set_ylabel("|position error| [m]")
    err.grid(False)
    ax.set_xlabel("t [s]")
    fig.suptitle("position and yaw tracking")
    return fig


def fig_traj3d(runs: list[Run]):
    fig = plt.figure()
    ax = fig.add_subplot(projection="3d")
    for run in runs:
        ax.plot(run.p[:, 0], run.p[:, 1], run.p[:, 2], label=run.label)
    ref = runs[0]
    ax.plot(ref.p_d[:, 0], ref.p_d[:, 1], ref.p_d[:, 2], **REF_STYLE, label="reference")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_zlabel("z [m]")
    ax.legend(loc="upper right")
    ax.set_title("trajectory")
    return fig


def fig_inputs(runs: list[Run]):
    fig, axes = plt.subplots(4, 1, sharex=True)
    _overlay(axes[0], runs, [r.f_u for r in runs], "f_u [N]")
    axes[0].legend(loc="upper right", ncols=len(runs))
    for i in range(3):
        _overlay(axes[i + 1], runs, [r.M_u[:, i] for r in runs],
                 f"M_{_AXES[i]} [N m]")
    axes[3].set_xlabel("t [s]")
    fig.suptitle("control inputs")
    return fig


def fig_attitude(runs: list[Run]):
    fig, axes = plt.subplots(3, 1, sharex=True)
    names = ("roll", "pitch", "yaw")
    for i in range(3):
        _overlay(axes[i], runs, [r.rpy[:, i] for r in runs], f"{names[i]} [rad]")
    axes[2].plot(runs[0].t, runs[0].psi_d, **REF_STYLE, label="reference")
    axes[0].legend(loc="upper right", ncols=len(runs))
    axes[2].set_xlabel("t [s]")
    fig.suptitle("attitude tracking")
    return fig


def fig_rpe(runs: list[Run]):
    fig, ax = plt.subplots()
    _overlay(ax, runs, [r.rpe for r in runs], "|p - p_d| [m]")
    ax.legend(loc="upper right")
    ax.set_xlabel("t [s]")
    ax.set_title("relative pose error")
    return fig


BUILDERS = {
    "tracking": fig_tracking,
    "traj3d": fig_traj3d,
    "inputs": fig_inputs,
    "attitude": fig_attitude,
    "rpe": fig_rpe,
}


def build_figure(kind, runs):
    with plt.style.context(str(STYLE_FILE)):
        return BUILDERS[kind](runs)


def render(spec: PlotSpec) -> Path:
    """Draw the requested figure and write it to spec.out."""
    runs = spec.load()
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig = build_figure(spec.kind, runs)
    try:
        kwargs = {"metadata": PNG_METADATA} if out.suffix.lower() == ".png" else {}
        fig.savefig(out, **kwargs)
    finally:
        plt.close(fig)
    return out
