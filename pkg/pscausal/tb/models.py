# -*- coding: utf-8 -*-

from collections import OrderedDict

from .constants import (DEFAULT_MIN_AGE, DEFAULT_INCLUDED_CODES, DEFAULT_CURE_CODES, INDICATORS, OPTIONAL_FIELDS,
                        LEDGER_REASONS, OUTCOME_CODES)
from ..errors import ValidationError


class RawTbRecord(object):
    """
    One notification as loaded. Fields that could not be parsed are None;
    ``extras`` keeps columns outside the column map untouched.
    """

    def __init__(self, outcome_code=None, dot=None, age=None, city=None, indicators=None, tb_type=None, hdi=None,
                 optional=None, extras=None):
        self.outcome_code = outcome_code
        self.dot = dot
        self.age = age
        self.city = city
        self.indicators = indicators if indicators is not None else {}
        self.tb_type = tb_type
        self.hdi = hdi
        self.optional = optional if optional is not None else {}
        self.extras = extras if extras is not None else {}

        if outcome_code is not None and outcome_code not in OUTCOME_CODES:
            raise ValidationError('unknown concluding diagnosis code {0}'.format(outcome_code))
        if age is not None and age < 0:
            raise ValidationError('age must be non-negative')

    def __repr__(self):
        return '<RawTbRecord code={0} dot={1} age={2} city={3}>'.format(self.outcome_code, self.dot, self.age, self.city)

    def missing_required(self):
        missing = [name for name in ('outcome_code', 'dot', 'age', 'city', 'tb_type', 'hdi') if getattr(self, name) is None]
        missing.extend(name for name in INDICATORS if self.indicators.get(name) is None)
        return missing

    def missing_optional(self):
        return [name for name in OPTIONAL_FIELDS if self.optional.get(name) is None]


class CohortSpec(object):
    def __init__(self, min_age=DEFAULT_MIN_AGE, included_codes=DEFAULT_INCLUDED_CODES, cure_codes=DEFAULT_CURE_CODES,
                 standardize=False, complete_case=False):
        included_codes = frozenset(int(c) for c in included_codes)
        cure_codes = frozenset(int(c) for c in cure_codes)
        if not cure_codes <= included_codes:
            raise ValidationError('cure codes must be a subset of the included codes')
        if min_age < 0:
            raise ValidationError('min_age must be non-negative')

        self.min_age = min_age
        self.included_codes = included_codes
        self.cure_codes = cure_codes
        self.standardize = bool(standardize)
        self.complete_case = bool(complete_case)

    def __repr__(self):
        return '<CohortSpec min_age={0} included={1} cure={2}>'.format(
            self.min_age, sorted(self.included_codes), sorted(self.cure_codes))

    def as_dict(self):
        return {
            'min_age': self.min_age,
            'included_codes': sorted(self.included_codes),
            'cure_codes': sorted(self.cure_codes),
            'standardize': self.standardize,
            'complete_case': self.complete_case,
        }


class ExclusionLedger(object):
    """Counts of excluded rows per reason; retained plus excluded equals the raw count."""

    def __init__(self, raw):
        self.raw = int(raw)
        self.counts = OrderedDict((reason, 0) for reason in LEDGER_REASONS)

    def __repr__(self):
        return '<ExclusionLedger raw={0} retained={1}>'.format(self.raw, self.retained)

    def exclude(self, reason):
        self.counts[reason] += 1

    @property
    def excluded(self):
        return sum(self.counts.values())

    @property
    def retained(self):
        return self.raw - self.excluded

    def as_dict(self):
        return {
            'raw': self.raw,
            'retained': self.retained,
            'excluded': dict(self.counts),
        }
