#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Command line entry point for lvphase.

Every sub-command reads an optional run file, applies ``--set`` overrides and
writes one CSV artifact (stdout by default). Exit codes: 0 success, 1 usage
or configuration error, 2 runtime error.

Examples:
    lvphase isotherm --set run.isotherm.theta=0.8 --out isotherm.csv
    lvphase hysteresis --config runs/fig.cfg --set run.hysteresis.u=-0.4
    lvphase validate --seed 7
"""

import sys
from typing import List, Optional

import click
from loguru import logger

from lvphase import __version__
from lvphase.config.parser import load_config
from lvphase.config.settings import get_config
from lvphase.core.commands import COMMANDS, EXIT_OK, EXIT_USAGE, run_command
from lvphase.exceptions import ParseError, ValidationError
from lvphase.utils.logging_config import setup_logging

COMMAND_HELP = {
    "isotherm": "Stable-branch isotherm nu(p) with the coexistence plateau (columns p,nu,phi,branch).",
    "phase-diagram": "Number of local minima over a (u, h/a) grid (columns u,h_over_a,n_minima).",
    "minima": "Classified stationary points of f at one (p, theta).",
    "spinodal": "Spinodal fields over a temperature range.",
    "hysteresis": "Up/down sweep of h/a following a local minimum (columns h_over_a,phi,branch).",
    "relax": "Isothermal homogeneous relaxation under a pressure schedule.",
    "thermal": "Homogeneous relaxation coupled to the heat equation.",
    "pde1d": "1-D gradient flow of an interface profile (energy series and final profile).",
    "validate": "Run the thermodynamic audit suite (AuditReport columns, summary on stderr).",
}


def common_options(func):
    """Options shared by every sub-command."""
    func = click.option("--quiet", is_flag=True, help="Only log warnings and errors.")(func)
    func = click.option("--seed", type=click.IntRange(min=0), default=None,
                        help="Seed for randomized audits.")(func)
    func = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                        help="Override a config key (model.a=2, run.isotherm.theta=0.8).")(func)
    func = click.option("--out", "out_path", default="-", show_default=True,
                        help="Output CSV path, '-' for stdout.")(func)
    func = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                        default=None, help="Run file with [model] and [run.<command>] sections.")(func)
    return func


def _execute(command: str, config_path: Optional[str], out_path: str,
             overrides: List[str], seed: Optional[int], quiet: bool) -> int:
    setup_logging(get_config(), quiet=quiet)
    try:
        config = load_config(config_path, list(overrides))
    except (ParseError, ValidationError) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return EXIT_USAGE
    logger.debug(f"Running {command} with kind={config.kind.value}")
    return run_command(command, config, out_path, seed)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="lvphase")
def cli():
    """Liquid-vapour phase-field model: equilibria, dynamics and audits."""


def _register(name: str):
    @common_options
    def command(config_path, out_path, overrides, seed, quiet):
        return _execute(name, config_path, out_path, overrides, seed, quiet)

    command.__doc__ = COMMAND_HELP[name]
    cli.command(name, help=COMMAND_HELP[name])(command)


for _name in COMMANDS:
    _register(_name)


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point; returns the process exit code."""
    try:
        result = cli.main(args=argv, prog_name="lvphase", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    return EXIT_OK if result is None else int(result)


if __name__ == "__main__":
    sys.exit(main())
