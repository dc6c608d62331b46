"""CSV and report persistence for simulation logs.

The column order is the on-disk contract consumed by the plotting package;
see COLUMNS. Floats are written with repr, the shortest string that parses
back to the identical double, so a write/read round trip is lossless and
reruns of the same scenario are byte-identical. Lines end with CRLF per
RFC 4180.
"""

from __future__ import annotations

import csv

import numpy as np

from .metrics import MetricsReport
from .sim import SimLog

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

# (log attribute, width) in on-disk order; widths must line up with COLUMNS.
_FIELDS = (
    ("t", 1), ("p", 3), ("v", 3), ("quat", 4), ("omega", 3),
    ("p_d", 3), ("psi_d", 1), ("e_p", 3), ("e_R", 3), ("f_u", 1),
    ("M_u", 3), ("sigma_tran", 3), ("sigma_rot", 3), ("f_ext", 3), ("M_ext", 3),
)


class CsvFormatError(ValueError):
    """Raised when a CSV file does not carry the expected log columns."""


def write_csv(log: SimLog, path):
    """Write one row per controller tick; an empty log writes just the header."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(COLUMNS)
            n = len(log)
            wide = [
                getattr(log, name) if width > 1 else np.reshape(getattr(log, name), (n, 1))
                for name, width in _FIELDS
            ]
            for k in range(n):
                row = []
                for block in wide:
                    row.extend(repr(float(x)) for x in block[k])
                writer.writerow(row)
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from None


def read_csv(path, name="", controller="") -> SimLog:
    """Parse a log CSV back into arrays; the header must match COLUMNS."""
    try:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = tuple(next(reader))
            except StopIteration:
                raise CsvFormatError(f"{path}: empty file, expected a header row") from None
            if header != COLUMNS:
                missing = [c for c in COLUMNS if c not in header]
                extra = [c for c in header if c not in COLUMNS]
                raise CsvFormatError(
                    f"{path}: header mismatch; missing {missing or 'none'}, unexpected {extra or 'none'}"
                )
            data = []
            for row in reader:
                if len(row) != len(COLUMNS):
                    raise CsvFormatError(f"{path}: row {len(data) + 2} has {len(row)} fields")
                data.append([float(x) for x in row])
    except OSError as exc:
        raise OSError(f"cannot read CSV {path}: {exc}") from None

    table = np.asarray(data, dtype=float).reshape((len(data), len(COLUMNS)))
    parts = {}
    col = 0
    for field_name, width in _FIELDS:
        block = table[:, col:col + width]
        parts[field_name] = block[:, 0] if width == 1 else block
        col += width
    h = float(parts["t"][1] - parts["t"][0]) if len(data) >= 2 else 0.0
    return SimLog(name=name, controller=controller, h=h, diverged=False, **parts)


def write_report(m: MetricsReport, path, title="", diverged=False):
    """Human-readable metrics plus a key=value block for CI to grep."""
    lines = []
    if title:
        lines.append(title)
    if diverged:
        lines.append("RUN DIVERGED; metrics cover the pre-divergence window")
    lines.append(
        "position RMSE [m]      x={} y={} z={}".format(*(repr(v) for v in m.rmse))
    )
    lines.append(
        "max |error| [m]        x={} y={} z={}".format(*(repr(v) for v in m.max_abs))
    )
    lines.append(f"relative pose error [m]  {m.rpe!r}")
    lines.append(
        "chattering index [N m] mx={} my={} mz={}".format(*(repr(v) for v in m.chattering))
    )
    lines.append(f"settling time [s]        {m.settling_time!r}")
    lines.append(f"window [s]               ({m.window[0]!r}, {m.window[1]!r}]")
    lines.append("")
    lines.append("[metrics]")
    for key, value in m.as_items():
        lines.append(f"{key}={value!r}")
    if diverged:
        lines.append("diverged=1")
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report {path}: {exc}") from None
    return text
