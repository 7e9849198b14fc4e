# -*- coding: utf-8 -*-

from .constants import (PS1, PS2, PS3, PROPENSITY_MODELS, OUTCOME_MODELS, BINARY_MODELS, MODEL_REGISTRY,
                        POSTERIOR_MEAN_PARAMS, POSTERIOR_MEAN_PS, EXPOSURE_NAME)
from .models import PropensityModelKind, PropensityEstimate, OutcomeModelKind, AtePosterior, TwoStepReport
from .propensity import estimate_propensity, build_propensity_spec
from .outcome import (fit_outcome, fit_outcome_spec, build_outcome_spec, outcome_design, ate_posterior,
                      relative_ate, relative_or)
from .two_step import two_step
