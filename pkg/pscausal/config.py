# -*- coding: utf-8 -*-

import os
import tempfile

from .utils import INSTANCE_FOLDER_PATH, default_workers


class BaseConfig(object):

    PROJECT = "pscausal"
    VERSION = '0.3.0'

    # Get app root path, also can use flask.root_path.
    PROJECT_ROOT = os.path.abspath(os.path.dirname(os.path.dirname(__file__)))

    DEBUG = False
    TESTING = False

    LOG_FOLDER = os.path.join(INSTANCE_FOLDER_PATH, 'logs')
    LOG_LEVEL = 'INFO'

    # None resolves when a command runs: $PSCAUSAL_OUTPUT_DIR, else ./output.
    OUTPUT_DIR = None
    MANIFEST_SCHEMA_VERSION = 1

    SEED = None
    WORKERS = default_workers()

    # MCMC budget per model fit.
    CHAINS = 2
    ITERS = 1500
    WARMUP = 500
    RHAT_THRESHOLD = 1.06

    # Priors.
    FIXED_EFFECT_SD = 10.0
    RE_SCALE_PRIOR = 1.0
    JITTER = 1e-8
    # Per-coefficient prior sd by design column name; 0 fixes the coefficient at zero.
    COEFFICIENT_PRIORS = {}

    SEPARATION_EPS = 1e-6
    PARETO_K_THRESHOLD = 0.7
    SMD_THRESHOLD = 0.10
    MAX_NONCONVERGED_FRACTION = 0.2

    # TB ingestion; None means auto-detect.
    TB_DELIMITER = None
    TB_COLUMN_MAP = {}


class DefaultConfig(BaseConfig):

    DEBUG = False


class TestConfig(BaseConfig):
    TESTING = True
    LOG_LEVEL = 'DEBUG'

    LOG_FOLDER = os.path.join(tempfile.gettempdir(), 'pscausal-tests', 'logs')
    OUTPUT_DIR = os.path.join(tempfile.gettempdir(), 'pscausal-tests', 'output')

    WORKERS = 1
    CHAINS = 2
    ITERS = 600
    WARMUP = 200
