# -*- coding: utf-8 -*-

import click

from flask.cli import FlaskGroup

from pscausal import create_app
from pscausal.config import DefaultConfig


def _create_app(*args, **kwargs):
    return create_app(DefaultConfig)


@click.group(cls=FlaskGroup, create_app=_create_app, add_default_commands=False)
def cli():
    """Propensity score analyses of clustered observational data."""


if __name__ == "__main__":
    cli()
