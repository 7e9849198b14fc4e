# -*- coding: utf-8 -*-

from .constants import INDEPENDENT, EXPONENTIAL, CORRELATION_KINDS
from .models import Dataset, ClusterMap, CorrelationModel, PriorSpec, build_cluster_map
from .priors import folded_normal_decay_prior, half_cauchy_logpdf, folded_normal_logpdf, normal_logpdf
from .spatial import exponential_correlation, factor_correlation, max_pairwise_distance, pairwise_distances
