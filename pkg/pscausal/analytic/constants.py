# -*- coding: utf-8 -*-

# Fitted linear-outcome models.
MD1 = 'MD1'
MD2 = 'MD2'
MD3 = 'MD3'
MD4 = 'MD4'

LINEAR_MODELS = (MD1, MD2, MD3, MD4)

LINEAR_MODEL_DESCRIPTIONS = {
    MD1: 'fixed-effect balancing score, OLS outcome fit',
    MD2: 'mixed balancing score (BLUP), OLS outcome fit',
    MD3: 'fixed-effect balancing score, GLS outcome fit',
    MD4: 'mixed balancing score (BLUP), GLS outcome fit',
}

# Solver methods for unit_var * I + cluster_var * A A^T.
DENSE = 'dense'
WOODBURY = 'woodbury'
SOLVE_METHODS = (DENSE, WOODBURY)

# Singular values below this fraction of the largest mark a rank deficiency.
RANK_TOLERANCE = 1e-10
