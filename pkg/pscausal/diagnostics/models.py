# -*- coding: utf-8 -*-

import numpy as np
import pandas as pd

from .constants import SMD_THRESHOLD, PARETO_K_THRESHOLD, QUANTILE_LABELS


class SmdReport(object):
    """
    Covariate balance table: one row per covariate, an ``Unweighted`` column
    and one ``Weighted-<model>`` column per propensity model.
    """

    def __init__(self, table, threshold=SMD_THRESHOLD):
        self.table = table
        self.threshold = float(threshold)

    def __repr__(self):
        return '<SmdReport covariates={0} columns={1}>'.format(len(self.table.index), list(self.table.columns))

    @property
    def covariates(self):
        return list(self.table.index)

    @property
    def columns(self):
        return list(self.table.columns)

    @property
    def flags(self):
        """|d| above the threshold; not-a-value entries are not flagged here."""
        return self.table.abs() > self.threshold

    @property
    def degenerate(self):
        """Entries whose pooled variance was zero."""
        return self.table.isna()

    def value(self, covariate, column):
        return float(self.table.loc[covariate, column])

    def exceeds(self, column):
        return [name for name, flag in self.flags[column].items() if flag]

    def to_frame(self):
        frame = self.table.copy()
        frame.index.name = 'covariate'
        return frame.reset_index()

    def as_dict(self):
        return {
            'threshold': self.threshold,
            'smd': dict((column, dict((k, None if np.isnan(v) else float(v)) for k, v in self.table[column].items()))
                        for column in self.table.columns),
            'exceeds': dict((column, self.exceeds(column)) for column in self.table.columns),
            'degenerate': dict((column, [k for k, v in self.degenerate[column].items() if v])
                               for column in self.table.columns),
        }


class PositivitySummary(object):
    """Five-number summaries of the propensity score per exposure group and their overlap."""

    def __init__(self, treated, control, overlap):
        self.treated = treated
        self.control = control
        self.overlap = overlap

    def __repr__(self):
        return '<PositivitySummary overlap={0} empty={1}>'.format(self.overlap, self.empty_overlap)

    @property
    def empty_overlap(self):
        return not self.overlap[0] <= self.overlap[1]

    def as_dict(self):
        return {
            'treated': dict(zip(QUANTILE_LABELS, self.treated)),
            'control': dict(zip(QUANTILE_LABELS, self.control)),
            'overlap': list(self.overlap),
            'empty_overlap': self.empty_overlap,
        }


class FitReport(object):
    """
    Predictive fit criteria. A report from :func:`waic` leaves the LOO
    fields empty and vice versa; :meth:`merge` combines the two.
    """

    def __init__(self, elpd_waic=None, p_waic=None, elpd_loo=None, p_loo=None, pointwise=None,
                 pareto_k=None, truncated=None, k_threshold=PARETO_K_THRESHOLD):
        self.elpd_waic = elpd_waic
        self.p_waic = p_waic
        self.elpd_loo = elpd_loo
        self.p_loo = p_loo
        self.pointwise = pointwise if pointwise is not None else {}
        self.pareto_k = pareto_k
        self.truncated = truncated
        self.k_threshold = float(k_threshold)

    def __repr__(self):
        return '<FitReport waic={0} loo={1}>'.format(self.waic, self.loo)

    @property
    def waic(self):
        return None if self.elpd_waic is None else -2.0 * self.elpd_waic

    @property
    def loo(self):
        return None if self.elpd_loo is None else -2.0 * self.elpd_loo

    @property
    def high_k(self):
        """Indices of observations whose Pareto k-hat exceeds the threshold."""
        if self.pareto_k is None:
            return np.zeros(0, dtype=int)
        with np.errstate(invalid='ignore'):
            return np.flatnonzero(self.pareto_k > self.k_threshold)

    @property
    def n_high_k(self):
        return int(self.high_k.size)

    @property
    def n_truncated(self):
        return 0 if self.truncated is None else int(np.sum(self.truncated))

    def merge(self, other):
        pointwise = dict(self.pointwise)
        pointwise.update(other.pointwise)

        def pick(name):
            value = getattr(self, name)
            return getattr(other, name) if value is None else value

        return FitReport(elpd_waic=pick('elpd_waic'), p_waic=pick('p_waic'), elpd_loo=pick('elpd_loo'),
                         p_loo=pick('p_loo'), pointwise=pointwise, pareto_k=pick('pareto_k'),
                         truncated=pick('truncated'), k_threshold=self.k_threshold)

    def as_dict(self):
        return {
            'elpd_waic': self.elpd_waic,
            'p_waic': self.p_waic,
            'waic': self.waic,
            'elpd_loo': self.elpd_loo,
            'p_loo': self.p_loo,
            'loo': self.loo,
            'n_high_k': self.n_high_k,
            'n_truncated': self.n_truncated,
        }

    def pointwise_frame(self):
        return pd.DataFrame(dict((k, np.asarray(v)) for k, v in self.pointwise.items()))
