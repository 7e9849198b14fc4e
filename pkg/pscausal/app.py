# -*- coding: utf-8 -*-

import os
import logging
import logging.handlers

from flask import Flask

from .config import DefaultConfig
from .commands import COMMANDS
from .utils import INSTANCE_FOLDER_PATH, CONFIG_ENVVAR, make_dir

# For import *
__all__ = ['create_app']


def create_app(config=None, app_name=None):
    """Create the Flask app that carries configuration, logging and the CLI."""

    if app_name is None:
        app_name = DefaultConfig.PROJECT

    app = Flask(app_name, instance_path=INSTANCE_FOLDER_PATH, instance_relative_config=True)

    configure_app(app, config)
    configure_logging(app)
    configure_cli(app, COMMANDS)

    return app


def configure_app(app, config=None):
    """Different ways of configurations."""

    app.config.from_object(DefaultConfig)

    # Instance folder first, then an explicit file named by the environment.
    app.config.from_pyfile('pscausal.cfg', silent=True)
    app.config.from_envvar(CONFIG_ENVVAR, silent=True)

    if config:
        app.config.from_object(config)


def configure_cli(app, commands):
    """Register the analysis commands on the app's click group."""

    for command in commands:
        app.cli.add_command(command)


def configure_logging(app):
    """Configure file(info) logging for the app and every library module."""

    level = logging.DEBUG if app.config['DEBUG'] else getattr(logging, str(app.config['LOG_LEVEL']).upper(), logging.INFO)
    app.logger.setLevel(level)

    for handler in list(app.logger.handlers):
        if isinstance(handler, logging.handlers.RotatingFileHandler):
            app.logger.removeHandler(handler)
            handler.close()

    make_dir(app.config['LOG_FOLDER'])
    info_log = os.path.join(app.config['LOG_FOLDER'], 'info.log')
    info_file_handler = logging.handlers.RotatingFileHandler(info_log, maxBytes=100000, backupCount=10)
    info_file_handler.setLevel(level)
    info_file_handler.setFormatter(logging.Formatter(
        '%(asctime)s %(levelname)s: %(message)s '
        '[in %(pathname)s:%(lineno)d]')
    )

    app.logger.addHandler(info_file_handler)
