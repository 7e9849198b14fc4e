# -*- coding: utf-8 -*-

from .constants import MD1, MD2, MD3, MD4, LINEAR_MODELS, DENSE, WOODBURY
from .models import LinearSimConfig, LinearModelVariant, EstimatorReport, VARIANTS
from .linalg import BlockCovariance
from .estimators import (generate_linear, balancing_score_fixed, balancing_score_mixed,
                         conditional_moments_Y, fit_linear_outcome, theoretical_bias_variance,
                         evaluate_linear_model, correlated_effects)
