# -*- coding: utf-8 -*-

from .constants import DESIGN_COVARIATES, DEFAULT_COLUMN_MAP, LEDGER_REASONS
from .models import RawTbRecord, CohortSpec, ExclusionLedger
from .ingest import load, cohort_records, derive_cohort, attach_geography
