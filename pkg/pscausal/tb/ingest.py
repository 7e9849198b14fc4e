# -*- coding: utf-8 -*-
"""
    Loading the TB notification file, the cohort filter and the city
    centroids.
"""

import io
import logging

import numpy as np
import pandas as pd

from .constants import (DEFAULT_COLUMN_MAP, REQUIRED_FIELDS, INDICATORS, OPTIONAL_FIELDS, OUTCOME_CODES,
                        TB_TYPE_CODES, PULMONARY, EXTRAPULMONARY, BOTH, YES_VALUES, NO_VALUES, MALE_VALUES,
                        FEMALE_VALUES, AGE_YEARS_PREFIX, DESIGN_COVARIATES, TB_PULM, TB_EXTPULM, AGE, HDI,
                        CODE_NOT_INCLUDED, BELOW_MIN_AGE, MISSING_REQUIRED, MISSING_OPTIONAL, CENTROID_COLUMNS)
from .models import RawTbRecord, CohortSpec, ExclusionLedger
from ..core import Dataset
from ..errors import IngestError

log = logging.getLogger(__name__)

TB_TYPE_NAMES = {
    'pulmonar': PULMONARY,
    'pulmonary': PULMONARY,
    'extrapulmonar': EXTRAPULMONARY,
    'extrapulmonary': EXTRAPULMONARY,
    'pulmonar + extrapulmonar': BOTH,
    'both': BOTH,
}


def _token(value):
    """Lower-cased stripped text; integral numbers lose their decimal part. None when blank."""
    if value is None:
        return None
    text = str(value).strip()
    if not text or text.lower() == 'nan':
        return None
    try:
        number = float(text.replace(',', '.'))
    except ValueError:
        return text.lower()
    if np.isfinite(number) and number.is_integer():
        return str(int(number))
    return text.lower()


def parse_float(value):
    token = _token(value)
    if token is None:
        return None
    try:
        number = float(token.replace(',', '.'))
    except ValueError:
        return None
    return number if np.isfinite(number) else None


def parse_int(value):
    number = parse_float(value)
    if number is None or not number.is_integer():
        return None
    return int(number)


def parse_yes_no(value):
    token = _token(value)
    if token in YES_VALUES:
        return 1
    if token in NO_VALUES:
        return 0
    return None


def parse_sex(value):
    token = _token(value)
    if token in MALE_VALUES:
        return 1
    if token in FEMALE_VALUES:
        return 0
    return None


def parse_age(value):
    """Age in years; accepts plain years or the 4-digit unit-prefixed coding."""
    number = parse_float(value)
    if number is None or number < 0:
        return None
    if number >= 1000:
        prefix = int(number) // 1000
        if prefix == AGE_YEARS_PREFIX // 1000:
            return number - AGE_YEARS_PREFIX
        if prefix in (1, 2, 3):
            return 0.0
        return None
    return number


def parse_tb_type(value):
    token = _token(value)
    if token is None:
        return None
    return TB_TYPE_CODES.get(token, TB_TYPE_NAMES.get(token))


def parse_outcome_code(value):
    code = parse_int(value)
    return code if code in OUTCOME_CODES else None


def sniff_delimiter(header):
    """Semicolon when the header holds more semicolons than commas, else comma."""
    return ';' if header.count(';') > header.count(',') else ','


def _read_table(path, delimiter=None):
    try:
        with io.open(path, 'r', encoding='utf-8') as f:
            header = f.readline()
    except (IOError, OSError, UnicodeDecodeError) as err:
        raise IngestError('cannot read {0}: {1}'.format(path, err))
    if not header.strip():
        raise IngestError('{0} has no header row'.format(path))

    sep = delimiter or sniff_delimiter(header)
    try:
        frame = pd.read_csv(path, sep=sep, dtype=str, keep_default_na=False, encoding='utf-8')
    except (pd.errors.ParserError, UnicodeDecodeError, ValueError) as err:
        raise IngestError('malformed file {0}: {1}'.format(path, err))
    frame.columns = [c.strip() for c in frame.columns]
    return frame


def _record(row, columns, extra_columns):
    def get(field):
        return row.get(columns[field])

    indicators = dict((name, parse_yes_no(get(name))) for name in INDICATORS if name != 'male')
    indicators['male'] = parse_sex(get('sex'))
    optional = dict((name, _token(get(name))) for name in OPTIONAL_FIELDS)

    return RawTbRecord(outcome_code=parse_outcome_code(get('outcome_code')), dot=parse_yes_no(get('dot')),
                       age=parse_age(get('age')), city=_token(get('city')), indicators=indicators,
                       tb_type=parse_tb_type(get('tb_type')), hdi=parse_float(get('hdi')), optional=optional,
                       extras=dict((c, row[c]) for c in extra_columns))


def load(path, column_map=None, delimiter=None):
    """
    Read the notification file into RawTbRecord objects. ``column_map``
    overrides the default field -> column names; the delimiter (comma or
    semicolon) is detected from the header unless given.
    """
    columns = dict(DEFAULT_COLUMN_MAP)
    columns.update(column_map or {})

    frame = _read_table(path, delimiter)
    missing = [columns[field] for field in REQUIRED_FIELDS if columns[field] not in frame.columns]
    if missing:
        raise IngestError('{0} lacks required columns: {1}'.format(path, ', '.join(missing)))

    known = set(columns.values())
    extra_columns = [c for c in frame.columns if c not in known]

    records = [_record(row, columns, extra_columns) for row in frame.to_dict('records')]

    incomplete = sum(1 for r in records if r.missing_required())
    log.info('Loaded {0} records from {1}; {2} with missing required fields.'.format(len(records), path, incomplete))
    return records


def cohort_records(records, spec=None):
    """
    Order-preserving cohort filter. Each dropped row is charged to the first
    matching reason: code not included, below the minimum age, missing
    required field, missing optional covariate (complete-case only).
    """
    spec = spec if spec is not None else CohortSpec()
    ledger = ExclusionLedger(len(records))
    kept = []

    for record in records:
        if record.outcome_code is not None and record.outcome_code not in spec.included_codes:
            ledger.exclude(CODE_NOT_INCLUDED)
        elif record.age is not None and record.age < spec.min_age:
            ledger.exclude(BELOW_MIN_AGE)
        elif record.missing_required():
            ledger.exclude(MISSING_REQUIRED)
        elif spec.complete_case and record.missing_optional():
            ledger.exclude(MISSING_OPTIONAL)
        else:
            kept.append(record)

    return kept, ledger


def _standardize(values):
    sd = values.std(ddof=1) if values.size > 1 else 0.0
    return (values - values.mean()) / sd if sd > 0 else values - values.mean()


def derive_cohort(records, spec=None):
    """
    Dataset of the retained records: Y = 1 for cure codes, Z = DOT, the
    design covariates with TB type as two indicators against ``both``, and
    the city as cluster. The ledger is kept in ``extras['ledger']``.
    """
    spec = spec if spec is not None else CohortSpec()
    kept, ledger = cohort_records(records, spec)
    log.info('Cohort: {0} of {1} records retained; excluded {2}'.format(
        ledger.retained, ledger.raw, dict(ledger.counts)))
    if not kept:
        raise IngestError('no records left after the cohort filter')

    outcome = np.array([1.0 if r.outcome_code in spec.cure_codes else 0.0 for r in kept])
    exposure = np.array([float(r.dot) for r in kept])
    columns = {
        TB_PULM: np.array([1.0 if r.tb_type == PULMONARY else 0.0 for r in kept]),
        TB_EXTPULM: np.array([1.0 if r.tb_type == EXTRAPULMONARY else 0.0 for r in kept]),
        AGE: np.array([r.age for r in kept], dtype=float),
        HDI: np.array([r.hdi for r in kept], dtype=float),
    }
    for name in INDICATORS:
        columns[name] = np.array([float(r.indicators[name]) for r in kept])

    if spec.standardize:
        columns[AGE] = _standardize(columns[AGE])
        columns[HDI] = _standardize(columns[HDI])

    covariates = np.column_stack([columns[name] for name in DESIGN_COVARIATES])
    binary = [name for name in DESIGN_COVARIATES if name not in (AGE, HDI)]
    return Dataset(outcome, exposure, covariates, np.array([r.city for r in kept]),
                   covariate_names=DESIGN_COVARIATES, binary_covariates=binary,
                   extras={'ledger': ledger, 'cohort': spec})


def attach_geography(dataset, path, delimiter=None):
    """Join ``city_id,x,y`` centroids onto the clusters of ``dataset``."""
    frame = _read_table(path, delimiter)
    missing = [c for c in CENTROID_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestError('{0} lacks columns: {1}'.format(path, ', '.join(missing)))

    lookup = {}
    for row in frame.to_dict('records'):
        key = _token(row['city_id'])
        x, y = parse_float(row['x']), parse_float(row['y'])
        if key is None or x is None or y is None:
            raise IngestError('{0}: incomplete centroid row {1}'.format(path, row))
        if key in lookup:
            raise IngestError('{0}: duplicate city {1}'.format(path, key))
        lookup[key] = (x, y)

    labels = [_token(label) for label in dataset.cluster_labels]
    absent = [label for label in labels if label not in lookup]
    if absent:
        raise IngestError('missing centroids for {0} cities: {1}'.format(len(absent), ', '.join(absent[:10])))

    result = dataset.with_centroids(np.array([lookup[label] for label in labels]))
    log.info('Attached {0} centroids; max distance {1:.4g}.'.format(result.n_clusters, result.max_distance))
    return result
