# -*- coding: utf-8 -*-

from ..mcmc.constants import NO_RANDOM_EFFECT, IID, SPATIAL

# Exposure (propensity) models.
PS1 = 'PS1'
PS2 = 'PS2'
PS3 = 'PS3'

PROPENSITY_MODELS = (PS1, PS2, PS3)

PROPENSITY_RANDOM_EFFECT = {
    PS1: NO_RANDOM_EFFECT,
    PS2: IID,
    PS3: SPATIAL,
}

PROPENSITY_DESCRIPTIONS = {
    PS1: 'fixed effects only',
    PS2: 'fixed effects plus iid cluster effect',
    PS3: 'fixed effects plus spatial cluster effect',
}

# Confounding adjustment in the outcome model.
ADJUST_NONE = 'none'
ADJUST_COVARIATES = 'covariates'
ADJUST_PS = 'ps'

ADJUSTMENTS = (ADJUST_NONE, ADJUST_COVARIATES, ADJUST_PS)

# Outcome model grid: adjustment (none, covariates, PS1, PS2, PS3) by
# outcome random effect (none, iid, spatial).
OUTCOME_MODELS = {}
for _row, (_adjust, _ps) in enumerate([(ADJUST_NONE, None), (ADJUST_COVARIATES, None),
                                       (ADJUST_PS, PS1), (ADJUST_PS, PS2), (ADJUST_PS, PS3)]):
    for _col, _re in enumerate((NO_RANDOM_EFFECT, IID, SPATIAL)):
        OUTCOME_MODELS['M{0}'.format(3 * _row + _col + 1)] = (_adjust, _ps, _re)

del _row, _col, _adjust, _ps, _re

# Outcome models of the binary simulation study.
BINARY_MODELS = {
    'MD1': (ADJUST_PS, PS1, NO_RANDOM_EFFECT),
    'MD2': (ADJUST_PS, PS2, NO_RANDOM_EFFECT),
    'MD3': (ADJUST_PS, PS1, IID),
    'MD4': (ADJUST_PS, PS2, IID),
}

MODEL_REGISTRY = dict(OUTCOME_MODELS)
MODEL_REGISTRY.update(BINARY_MODELS)

# Propensity point estimate.
POSTERIOR_MEAN_PARAMS = 'posterior_mean_params'
POSTERIOR_MEAN_PS = 'posterior_mean_ps'
PS_POINTS = (POSTERIOR_MEAN_PARAMS, POSTERIOR_MEAN_PS)

# Design column names.
INTERCEPT_NAME = '(Intercept)'
EXPOSURE_NAME = 'Z'
PS_COLUMN_NAME = 'ps'

SEPARATION_EPS = 1e-6
# Fitted scores are kept this far away from 0 and 1.
PS_CLIP = 1e-15

# Sub-seed keys of the two stages.
PROPENSITY_STAGE = 0
OUTCOME_STAGE = 1
