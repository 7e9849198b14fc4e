# -*- coding: utf-8 -*-

# Cluster random-effect structure.
NO_RANDOM_EFFECT = 0
IID = 1
SPATIAL = 2

RANDOM_EFFECT_KINDS = {
    NO_RANDOM_EFFECT: 'none',
    IID: 'iid',
    SPATIAL: 'spatial',
}

RANDOM_EFFECT_LOOKUP = dict((name, kind) for kind, name in RANDOM_EFFECT_KINDS.items())

# Parameter labels.
RE_NAME = 'eta[{0}]'
RE_SCALE_NAME = 'sigma_re'
DECAY_NAME = 'decay'

# Default budget per fit.
DEFAULT_CHAINS = 2
DEFAULT_ITERS = 1500
DEFAULT_WARMUP = 500

RHAT_THRESHOLD = 1.06
# Fractional offset of the rank-normal transform.
RANK_OFFSET = 3.0 / 8.0

# Proposal adaptation during warmup.
ADAPT_BATCH = 25
ADAPT_RATE = 2.0
TARGET_ACCEPT_FIXED = 0.234
TARGET_ACCEPT_SCALAR = 0.44
FIXED_INNER_STEPS = 3
MIN_SCALE = 1e-4
MAX_SCALE = 50.0

# Penalized Newton start for the fixed effects.
NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-8

# Draws per chunk when evaluating per-draw quantities over all units.
DRAW_CHUNK = 100
