# -*- coding: utf-8 -*-

# Concluding diagnosis codes.
CURE = 1
ABANDON = 2
DEATH_TB = 3
DEATH_OTHER = 4
TRANSFERENCE = 5
CHANGE_OF_DIAGNOSIS = 6
DRUG_RESISTANCE = 7
CHANGE_OF_SCHEME = 8
FAILURE = 9
PRIMARY_ABANDON = 10

OUTCOME_CODES = {
    CURE: 'Cure',
    ABANDON: 'Abandon',
    DEATH_TB: 'Death by TB',
    DEATH_OTHER: 'Death by other causes',
    TRANSFERENCE: 'Transference',
    CHANGE_OF_DIAGNOSIS: 'Change of diagnosis',
    DRUG_RESISTANCE: 'Drug resistance',
    CHANGE_OF_SCHEME: 'Change of scheme',
    FAILURE: 'Failure',
    PRIMARY_ABANDON: 'Primary abandon',
}

DEFAULT_INCLUDED_CODES = (CURE, ABANDON, DEATH_TB, DEATH_OTHER, DRUG_RESISTANCE, CHANGE_OF_SCHEME)
DEFAULT_CURE_CODES = (CURE,)
DEFAULT_MIN_AGE = 11

# Type of TB.
PULMONARY = 'pulmonary'
EXTRAPULMONARY = 'extrapulmonary'
BOTH = 'both'

TB_TYPE_CODES = {
    '1': PULMONARY,
    '2': EXTRAPULMONARY,
    '3': BOTH,
}

# Indicator covariates, in design order.
INDICATORS = ('male', 'aids', 'alcoholism', 'diabetes', 'mental_illness', 'drug_use', 'smoker', 'prisoner',
              'homeless')

# Covariates loaded but left out of the default design.
OPTIONAL_FIELDS = ('ethnicity', 'schooling', 'immigrant', 'health_worker')

TB_PULM = 'tb_pulm'
TB_EXTPULM = 'tb_extpulm'
AGE = 'age'
HDI = 'hdi'

DESIGN_COVARIATES = ('male', TB_PULM, TB_EXTPULM, 'aids', 'alcoholism', 'diabetes', 'mental_illness', 'drug_use',
                     'smoker', 'prisoner', 'homeless', AGE, HDI)

# Logical field -> column in the published file.
DEFAULT_COLUMN_MAP = {
    'outcome_code': 'SITUA_ENCE',
    'dot': 'TRATSUP_AT',
    'age': 'NU_IDADE_N',
    'sex': 'CS_SEXO',
    'aids': 'AGRAVAIDS',
    'alcoholism': 'AGRAVALCOO',
    'diabetes': 'AGRAVDIABE',
    'mental_illness': 'AGRAVDOENC',
    'drug_use': 'AGRAVDROGA',
    'smoker': 'AGRAVTABAC',
    'prisoner': 'POP_LIBER',
    'homeless': 'POP_RUA',
    'tb_type': 'FORMA',
    'city': 'ID_MN_RESI',
    'hdi': 'IDHM',
    'ethnicity': 'CS_RACA',
    'schooling': 'CS_ESCOL_N',
    'immigrant': 'POP_IMIG',
    'health_worker': 'POP_SAUDE',
}

REQUIRED_FIELDS = ('outcome_code', 'dot', 'age', 'sex', 'aids', 'alcoholism', 'diabetes', 'mental_illness',
                   'drug_use', 'smoker', 'prisoner', 'homeless', 'tb_type', 'city', 'hdi')

YES_VALUES = frozenset(['1', 's', 'sim', 'y', 'yes', 'true'])
NO_VALUES = frozenset(['0', '2', 'n', 'nao', 'não', 'no', 'false'])
MALE_VALUES = frozenset(['m', '1', 'male', 'masculino'])
FEMALE_VALUES = frozenset(['f', '2', 'female', 'feminino'])

# Ages coded as unit digit plus value: 4 = years, 1..3 = hours, days, months.
AGE_YEARS_PREFIX = 4000

# Exclusion ledger reasons.
MISSING_REQUIRED = 'missing_required'
CODE_NOT_INCLUDED = 'code_not_included'
BELOW_MIN_AGE = 'below_min_age'
MISSING_OPTIONAL = 'missing_optional'

LEDGER_REASONS = (CODE_NOT_INCLUDED, BELOW_MIN_AGE, MISSING_REQUIRED, MISSING_OPTIONAL)

CENTROID_COLUMNS = ('city_id', 'x', 'y')
