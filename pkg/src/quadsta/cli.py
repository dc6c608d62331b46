"""Command-line front end: run, compare, sweep, validate.

Exit codes are a contract: 0 success, 1 configuration error, 2 divergence.
Scenario arguments resolve against the literal path first, then with a
.yaml suffix, then inside $QUADSTA_SCENARIO_DIR.
"""

from __future__ import annotations

import itertools
import math
import os
from pathlib import Path

import click
import numpy as np
import yaml

from . import logio, oracle, so3
from .kernels import PstaGains, PstaState, psta_step
from .metrics import compute_metrics
from .scenario import ScenarioError, apply_override, load_scenario
from .sim import run_scenario

SCENARIO_DIR_ENV = "QUADSTA_SCENARIO_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2


def resolve_scenario_path(arg):
    candidates = [Path(arg)]
    if not str(arg).endswith(".yaml"):
        candidates.append(Path(str(arg) + ".yaml"))
    env_dir = os.environ.get(SCENARIO_DIR_ENV)
    if env_dir:
        candidates.append(Path(env_dir) / arg)
        if not str(arg).endswith(".yaml"):
            candidates.append(Path(env_dir) / (str(arg) + ".yaml"))
    for c in candidates:
        if c.is_file():
            return c
    raise ScenarioError(f"scenario file not found: {arg}")


def _load(scenario, overrides, controller, duration, h):
    path = resolve_scenario_path(scenario)
    return load_scenario(
        path, overrides=overrides, controller=controller, duration=duration, h=h
    )


def _run_one(sc, kind, out_dir):
    """Simulate, persist log + metrics, return (log, report or None)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    log = run_scenario(sc, controller=kind)
    logio.write_csv(log, out_dir / "log.csv")
    title = f"{sc.name} [{kind}]"
    try:
        report = compute_metrics(log)
    except ValueError:
        # Diverged before the metrics window opened; leave a stub report.
        (out_dir / "metrics.txt").write_text(
            f"{title}\nRUN DIVERGED at t={log.duration!r} s; no samples in metrics window\n",
            encoding="utf-8",
        )
        return log, None
    logio.write_report(report, out_dir / "metrics.txt", title=title, diverged=log.diverged)
    return log, report


_scenario_argument = click.argument("scenario")
_override_option = click.option(
    "--override", "overrides", multiple=True, metavar="KEY=VALUE",
    help="Dot-path override into the scenario config; repeatable.",
)
_duration_option = click.option("--duration", type=float, default=None, help="Override run length [s].")
_h_option = click.option("--h", "h", type=float, default=None, help="Override controller step [s].")
_out_option = click.option(
    "--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
    help="Output directory (default out/<scenario>-<controller>).",
)


@click.group()
def cli():
    """Quadrotor sliding-mode tracking: simulate, compare, sweep, validate."""


@cli.command()
@_scenario_argument
@click.option("--controller", type=click.Choice(["psta", "smc", "psmc"]), default=None)
@_out_option
@_override_option
@_duration_option
@_h_option
def run(scenario, controller, out_dir, overrides, duration, h):
    """Run one scenario; writes <out>/log.csv and <out>/metrics.txt."""
    sc = _load(scenario, overrides, controller, duration, h)
    kind = sc.controller
    out_dir = out_dir or Path("out") / f"{sc.name}-{kind}"
    log, report = _run_one(sc, kind, out_dir)
    click.echo(f"wrote {out_dir / 'log.csv'} ({len(log)} rows)")
    click.echo(f"wrote {out_dir / 'metrics.txt'}")
    if report is not None:
        click.echo(
            "rmse [m] x={:.6g} y={:.6g} z={:.6g}  rpe={:.6g}".format(*report.rmse, report.rpe)
        )
    if log.diverged:
        click.echo(f"DIVERGED at t={log.duration:g} s", err=True)
        return EXIT_DIVERGED
    return EXIT_OK


@cli.command()
@_scenario_argument
@click.option(
    "--controller", "controllers", multiple=True,
    type=click.Choice(["psta", "smc", "psmc"]),
    help="Controller to include; repeat the flag. Default: psta and smc.",
)
@_out_option
@_override_option
@_duration_option
@_h_option
def compare(scenario, controllers, out_dir, overrides, duration, h):
    """Run several controllers on one scenario and tabulate the metrics."""
    controllers = list(controllers) if controllers else ["psta", "smc"]
    if len(controllers) < 2:
        raise ScenarioError("compare needs at least two --controller flags")
    sc = _load(scenario, overrides, None, duration, h)
    out_dir = out_dir or Path("out") / f"{sc.name}-compare"

    rows = []
    any_diverged = False
    for kind in controllers:
        log, report = _run_one(sc, kind, out_dir / kind)
        any_diverged = any_diverged or log.diverged
        rows.append((kind, log, report))

    header = (
        f"{'controller':<10} {'rmse_x':>10} {'rmse_y':>10} {'rmse_z':>10} "
        f"{'rpe':>10} {'chat_mx':>10} {'chat_my':>10} {'chat_mz':>10} {'status':>9}"
    )
    lines = [f"scenario {sc.name}", header]
    for kind, log, report in rows:
        status = "DIVERGED" if log.diverged else "ok"
        if report is None:
            lines.append(f"{kind:<10} {'-':>10} {'-':>10} {'-':>10} {'-':>10} "
                         f"{'-':>10} {'-':>10} {'-':>10} {status:>9}")
        else:
            lines.append(
                f"{kind:<10} {report.rmse[0]:>10.4g} {report.rmse[1]:>10.4g} "
                f"{report.rmse[2]:>10.4g} {report.rpe:>10.4g} "
                f"{report.chattering[0]:>10.4g} {report.chattering[1]:>10.4g} "
                f"{report.chattering[2]:>10.4g} {status:>9}"
            )
    table = "\n".join(lines) + "\n"
    click.echo(table, nl=False)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "compare.txt").write_text(table, encoding="utf-8")
    return EXIT_DIVERGED if any_diverged else EXIT_OK


def _parse_grid(specs):
    axes = []
    for spec in specs:
        key, sep, raw = spec.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ScenarioError(f"grid {spec!r}: expected key=v1,v2,...")
        values = []
        for piece in raw.split(","):
            piece = piece.strip()
            if not piece:
                continue
            try:
                values.append(yaml.safe_load(piece))
            except yaml.YAMLError:
                values.append(piece)
        if not values:
            raise ScenarioError(f"grid {spec!r}: no values")
        axes.append((key, values))
    if not axes:
        raise ScenarioError("sweep needs at least one --grid key=v1,v2,...")
    return axes


@cli.command()
@_scenario_argument
@click.option(
    "--grid", "grids", multiple=True, metavar="KEY=V1,V2,...",
    help="Gain grid axis as a dot-path with comma-separated values; repeatable.",
)
@click.option("--controller", type=click.Choice(["psta", "smc", "psmc"]), default=None)
@_out_option
@_override_option
@_duration_option
@_h_option
def sweep(scenario, grids, controller, out_dir, overrides, duration, h):
    """Cartesian gain sweep; one metrics row per point, best RMSE starred."""
    axes = _parse_grid(grids)
    keys = [k for k, _ in axes]
    points = list(itertools.product(*(vals for _, vals in axes)))

    rows = []
    for point in points:
        point_overrides = list(overrides) + [f"{k}={v}" for k, v in zip(keys, point)]
        sc = _load(scenario, point_overrides, controller, duration, h)
        log = run_scenario(sc)
        if log.diverged:
            rows.append((point, None, math.inf))
            continue
        report = compute_metrics(log)
        score = math.sqrt(sum(r * r for r in report.rmse))
        rows.append((point, report, score))

    best = min(range(len(rows)), key=lambda i: rows[i][2])
    label = " ".join(f"{k}" for k in keys)
    lines = [f"sweep over {label}",
             f"{'point':<40} {'rmse_x':>10} {'rmse_y':>10} {'rmse_z':>10} {'rpe':>10} {'':>2}"]
    for i, (point, report, score) in enumerate(rows):
        tag = " *" if i == best and math.isfinite(score) else ""
        point_text = ", ".join(str(v) for v in point)
        if report is None:
            lines.append(f"{point_text:<40} {'DIVERGED':>10} {'-':>10} {'-':>10} {'-':>10}{tag}")
        else:
            lines.append(
                f"{point_text:<40} {report.rmse[0]:>10.4g} {report.rmse[1]:>10.4g} "
                f"{report.rmse[2]:>10.4g} {report.rpe:>10.4g}{tag}"
            )
    table = "\n".join(lines) + "\n"
    click.echo(table, nl=False)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep.txt").write_text(table, encoding="utf-8")
    if not any(math.isfinite(score) for _, _, score in rows):
        return EXIT_DIVERGED
    return EXIT_OK


@cli.command()
@click.option("--draws", type=int, default=2000, show_default=True,
              help="Random gain/state draws per kernel suite.")
def validate(draws):
    """Run the built-in consistency suites and print pass/fail lines."""
    rng = np.random.default_rng(20260818)
    failures = 0

    # Kernel vs. independent bisection solver on random gains and states.
    worst = 0.0
    for _ in range(draws):
        gains = PstaGains(
            B=rng.uniform(0.5, 50.0), K=rng.uniform(0.5, 200.0),
            H=rng.uniform(0.01, 2.0), F1=rng.uniform(0.1, 50.0),
            F2=rng.uniform(0.1, 100.0), F=rng.uniform(1.0, 100.0),
            h=10.0 ** rng.uniform(-4, -1.5),
        )
        state = PstaState(a2=rng.normal(0.0, 2.0), v=rng.normal(0.0, 5.0))
        sigma = rng.normal(0.0, 3.0)
        u, new = psta_step(gains, state, sigma)
        u_ref, ref = oracle.psta_step_oracle(gains, state, sigma)
        scale = max(1.0, abs(u_ref), abs(ref.a2), abs(ref.v))
        err = max(abs(u - u_ref), abs(new.a2 - ref.a2), abs(new.v - ref.v)) / scale
        worst = max(worst, err)
    ok = worst <= 1e-9
    failures += not ok
    click.echo(f"inclusion consistency : {'PASS' if ok else 'FAIL'} (max rel err {worst:.3e})")

    # Projection residual bound: the projected drive never exceeds the drive.
    worst = 0.0
    for _ in range(draws):
        rho = rng.normal(0.0, 5.0)
        kap3 = rng.uniform(1e-6, 5.0)
        y = oracle.solve_sign_inclusion(rho, kap3)
        if abs(y) > abs(rho) + 1e-15:
            worst = max(worst, abs(y) - abs(rho))
    ok = worst == 0.0
    failures += not ok
    click.echo(f"projection bound      : {'PASS' if ok else 'FAIL'} (max excess {worst:.3e})")

    # Rotation integrity: long constant-rate spin stays orthonormal.
    R = np.eye(3)
    step = so3.exp_so3(np.array([0.3, -0.2, 0.9]) * 1e-3)
    for _ in range(10000):
        R = R @ step
    defect = so3.orthonormality_defect(R)
    ok = defect <= 1e-9
    failures += not ok
    click.echo(f"rotation integrity    : {'PASS' if ok else 'FAIL'} (defect {defect:.3e})")

    return EXIT_CONFIG if failures else EXIT_OK


def main(argv=None):
    try:
        result = cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 130
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except ScenarioError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG
    return int(result) if result is not None else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
