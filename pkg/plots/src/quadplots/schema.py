"""Harness CSV contract and loader.

The simulation harness writes one RFC-4180 file per run: a fixed 40-column
header, one record per controller tick, floats in shortest round-trip form.
That header is the whole interface between the two packages, so it is spelled
out here rather than imported from anywhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

COLUMNS = (
    "t",
    "p_x", "p_y", "p_z",
    "v_x", "v_y", "v_z",
    "q_w", "q_x", "q_y", "q_z",
    "omega_x", "omega_y", "omega_z",
    "pd_x", "pd_y", "pd_z",
    "psi_d",
    "ep_x", "ep_y", "ep_z",
    "eR_x", "eR_y", "eR_z",
    "f_u",
    "Mu_x", "Mu_y", "Mu_z",
    "sigma_t_x", "sigma_t_y", "sigma_t_z",
    "sigma_r_x", "sigma_r_y", "sigma_r_z",
    "fext_x", "fext_y", "fext_z",
    "Mext_x", "Mext_y", "Mext_z",
)


class SchemaError(ValueError):
    """Input file does not match the harness CSV contract."""


@dataclass(frozen=True)
class Run:
    """One loaded log: column arrays plus the label shown in legends."""

    label: str
    cols: dict = field(repr=False)

    def __len__(self):
        return self.cols["t"].size

    @property
    def t(self):
        return self.cols["t"]

    def vec3(self, prefix, suffixes=("x", "y", "z")):
        return np.column_stack([self.cols[f"{prefix}{s}"] for s in suffixes])

    @property
    def p(self):
        return self.vec3("p_")

    @property
    def p_d(self):
        return self.vec3("pd_")

    @property
    def e_p(self):
        return self.vec3("ep_")

    @property
    def M_u(self):
        return self.vec3("Mu_")

    @property
    def f_u(self):
        return self.cols["f_u"]

    @property
    def psi_d(self):
        return self.cols["psi_d"]

    @property
    def rpe(self):
        return np.linalg.norm(self.e_p, axis=1)

    @property
    def rpy(self):
        """Roll/pitch/yaw [rad] recovered from the logged quaternion (ZYX)."""
        w = self.cols["q_w"]
        x = self.cols["q_x"]
        y = self.cols["q_y"]
        z = self.cols["q_z"]
        roll = np.arctan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
        pitch = np.arcsin(np.clip(2.0 * (w * y - z * x), -1.0, 1.0))
        yaw = np.arctan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
        return np.column_stack([roll, pitch, yaw])


def default_label(path) -> str:
    # every harness run is written as <scenario>-<controller>/log.csv, so the
    # stem alone would collapse all defaults to "log"
    p = Path(path)
    if p.stem == "log" and p.parent.name:
        return p.parent.name
    return p.stem


def load_run(path, label=None) -> Run:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"input file not found: {path}")
    if path.stat().st_size == 0:
        raise SchemaError(f"{path}: file is empty")

    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: file is empty")
        if tuple(header) != COLUMNS:
            missing = [c for c in COLUMNS if c not in header]
            extra = [c for c in header if c not in COLUMNS]
            raise SchemaError(
                f"{path}: header does not match the harness schema; "
                f"expected [{', '.join(COLUMNS)}]; "
                f"found [{', '.join(header)}]"
                + (f"; missing [{', '.join(missing)}]" if missing else "")
                + (f"; unexpected [{', '.join(extra)}]" if extra else "")
            )
        rows = []
        for i, row in enumerate(reader, start=2):
            if len(row) != len(COLUMNS):
                raise SchemaError(
                    f"{path}: row {i} has {len(row)} fields, expected {len(COLUMNS)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise SchemaError(f"{path}: row {i}: {exc}") from None

    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(data[:, 0])) or np.any(np.diff(data[:, 0]) <= 0.0):
        raise SchemaError(f"{path}: time column is not strictly increasing")

    cols = {name: np.ascontiguousarray(data[:, j]) for j, name in enumerate(COLUMNS)}
    return Run(label=label if label is not None else default_label(path), cols=cols)


KINDS = ("tracking", "traj3d", "inputs", "attitude", "rpe")


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: input logs, figure kind, destination, legend labels."""

    inputs: tuple
    kind: str
    out: str
    labels: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise SchemaError(
                f"{len(self.labels)} labels for {len(self.inputs)} inputs; "
                "give one label per input or none"
            )

    def load(self) -> list[Run]:
        labels = self.labels or [None] * len(self.inputs)
        return [load_run(p, lab) for p, lab in zip(self.inputs, labels)]
