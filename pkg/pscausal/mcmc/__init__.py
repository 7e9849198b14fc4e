# -*- coding: utf-8 -*-

from .constants import NO_RANDOM_EFFECT, IID, SPATIAL, RANDOM_EFFECT_KINDS, RANDOM_EFFECT_LOOKUP, RE_SCALE_NAME, DECAY_NAME
from .models import LogisticMixedSpec, McmcSettings, PosteriorSample, ConvergenceReport
from .posterior import log_posterior, log_posterior_terms, pointwise_loglik, linear_predictor_draws, fixed_effect_mode
from .convergence import rhat, rhat_values, effective_sample_size
from .sampler import sample, run_chain, posterior_point
