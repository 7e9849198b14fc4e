# -*- coding: utf-8 -*-
"""
    Unit Tests
    ~~~~~~~~~~

    Define TestCase as base class for unit tests.
    Ref: http://packages.python.org/Flask-Testing/
"""

import os
import shutil

import numpy as np

from flask_testing import TestCase as Base

from pscausal import create_app
from pscausal.config import TestConfig
from pscausal.core import Dataset

SLOW = os.environ.get('PSCAUSAL_SLOW_TESTS') == '1'
TB_DATA = os.environ.get('PSCAUSAL_TB_DATA')
TB_CENTROIDS = os.environ.get('PSCAUSAL_TB_CENTROIDS')


class TestCase(Base):
    """Base TestClass for the package."""

    def create_app(self):
        """Create and return a testing flask app."""

        return create_app(TestConfig)

    def tearDown(self):
        """Remove anything the commands wrote."""

        shutil.rmtree(TestConfig.OUTPUT_DIR, ignore_errors=True)


def logistic_dataset(m=20, n=10, seed=1, beta=(-0.3, 1.0, 0.5), tau=0.4, effect_sd=0.5, centroids=False):
    """Small clustered data set with a binary exposure and binary outcome."""
    rng = np.random.default_rng(seed)
    cluster = np.repeat(np.arange(m), n)
    X = np.column_stack([rng.normal(size=m * n), rng.binomial(1, 0.4, size=m * n)])
    effect = rng.normal(scale=effect_sd, size=m)[cluster]

    ps = 1.0 / (1.0 + np.exp(-(0.2 + X.dot([0.6, -0.4]) + effect)))
    Z = rng.binomial(1, ps)
    lin = beta[0] + tau * Z + X.dot(beta[1:]) + effect
    Y = rng.binomial(1, 1.0 / (1.0 + np.exp(-lin)))

    coords = rng.uniform(0.0, 10.0, size=(m, 2)) if centroids else None
    return Dataset(Y, Z, X, cluster, covariate_names=['X1', 'X2'], centroids=coords)
