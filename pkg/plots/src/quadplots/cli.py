"""Command-line front end: `quadplots render ...` or the bare `render ...`."""

from __future__ import annotations

import sys

import click

from .figures import render as render_spec
from .schema import KINDS, PlotSpec, SchemaError


@click.command()
@click.option("--kind", type=click.Choice(KINDS), required=True,
              help="Figure kind to draw.")
@click.option("--in", "inputs", type=click.Path(), multiple=True, required=True,
              help="Input log CSV; repeat the flag to overlay runs.")
@click.option("--out", "out", type=click.Path(), required=True,
              help="Output image path (.png recommended).")
@click.option("--label", "labels", multiple=True,
              help="Legend label, one per input; defaults to the file name.")
def render(kind, inputs, out, labels):
    """Render one figure from harness CSV logs."""
    spec = PlotSpec(inputs=tuple(inputs), kind=kind, out=out, labels=tuple(labels))
    path = render_spec(spec)
    click.echo(f"wrote {path}")


@click.group()
def cli():
    """Figure rendering for simulation harness logs."""


cli.add_command(render)


def _run(command, argv):
    try:
        return command.main(args=argv, standalone_mode=False) or 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 130
    except click.ClickException as exc:
        exc.show()
        return 1
    except (SchemaError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


def main(argv=None):
    sys.exit(_run(cli, sys.argv[1:] if argv is None else argv))


def render_main(argv=None):
    sys.exit(_run(render, sys.argv[1:] if argv is None else argv))
