# -*- coding: utf-8 -*-

import math

# Correlation kinds for cluster random effects.
INDEPENDENT = 0
EXPONENTIAL = 1

CORRELATION_KINDS = {
    INDEPENDENT: 'independent',
    EXPONENTIAL: 'exponential',
}

# Diagonal jitter added before any correlation matrix is factorized.
DEFAULT_JITTER = 1e-8

DEFAULT_FIXED_EFFECT_SD = 10.0
DEFAULT_RE_SCALE_PRIOR = 1.0

# Correlation level defining the practical range of the exponential kernel.
PRACTICAL_RANGE_CORRELATION = 0.05
PRACTICAL_RANGE_FACTOR = -math.log(PRACTICAL_RANGE_CORRELATION)

# Decay prior sd as a fraction of its location; below 1 the folded normal
# keeps its density mode at the location.
DECAY_PRIOR_SD_RATIO = 0.5
