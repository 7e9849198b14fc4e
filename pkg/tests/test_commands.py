# -*- coding: utf-8 -*-

import io
import json
import os
import shutil
import tempfile

import numpy as np
import pandas as pd

from mock import patch

from pscausal.config import TestConfig
from pscausal.pipeline import estimate_propensity
from pscausal.simulation import LinearGridSpec, ReplicateSummary
from pscausal.tb import DEFAULT_COLUMN_MAP
from pscausal.utils import default_output_dir

from tests import TestCase

FIELDS = ('outcome_code', 'dot', 'age', 'sex', 'aids', 'alcoholism', 'diabetes', 'mental_illness', 'drug_use',
          'smoker', 'prisoner', 'homeless', 'tb_type', 'city', 'hdi')


def _notifications(path, rows=150, cities=6, seed=0):
    """Synthetic notification file in the published column layout."""
    rng = np.random.default_rng(seed)
    hdi = rng.uniform(0.6, 0.8, size=cities)
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(';'.join(DEFAULT_COLUMN_MAP[name] for name in FIELDS) + '\n')
        for _ in range(rows):
            city = int(rng.integers(cities))
            values = [
                str(rng.choice([1, 1, 1, 2, 3])),
                str(rng.choice([1, 2])),
                str(4000 + int(rng.integers(15, 80))),
                str(rng.choice(['M', 'F'])),
            ]
            values.extend(str(rng.choice([1, 2, 2, 2])) for _ in range(8))
            values.extend([str(rng.choice([1, 2, 3])), str(100 + city), '{0:.3f}'.format(hdi[city]).replace('.', ',')])
            f.write(';'.join(values) + '\n')
    return path


def _tiny_preset(name, **changes):
    return LinearGridSpec(m=6, n_set=(2,), sigma2_grid=(0.3, 1.2), rho_set=(0.0, 0.5), replicates=2).replace(**changes)


def _summaries(cfg, settings, replicate):
    return [ReplicateSummary(replicate, name, 0.01, 0.05, or_mean=1.0, covers_zero=True,
                             smd_by_covariate={'X1': 0.05, 'X2': -0.02})
            for name in ('MD1', 'MD2', 'MD3', 'MD4')]


class TestCommands(TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.data = _notifications(os.path.join(self.tmp, 'notifications.csv'))
        self.runner = self.app.test_cli_runner()
        # Short chains; the gate itself is covered by the sampler tests.
        self.app.config['RHAT_THRESHOLD'] = 10.0

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)
        TestCase.tearDown(self)

    def _invoke(self, *args):
        return self.runner.invoke(args=list(args))

    def _output(self, filename):
        return os.path.join(TestConfig.OUTPUT_DIR, filename)

    def _read(self, filename):
        with io.open(self._output(filename), 'rb') as f:
            return f.read()

    def test_commands_registered(self):
        result = self._invoke('--help')

        assert result.exit_code == 0
        for name in ('simulate-linear', 'simulate-binary', 'fit', 'balance', 'compare'):
            assert name in result.output

    def test_simulate_linear_writes_table_and_manifest(self):
        with patch('pscausal.commands.preset', side_effect=_tiny_preset):
            result = self._invoke('simulate-linear', '--seed', '5')

        assert result.exit_code == 0, result.output
        table = pd.read_csv(self._output('linear.csv'))
        assert list(table.columns) == ['n', 'rho', 'sigma2_T', 'sigma2_W', 'model', 'metric', 'value']
        assert len(table) == 8 * 4 * 4

        manifest = json.loads(self._read('manifest.json').decode('utf-8'))
        assert manifest['command'] == 'simulate-linear'
        assert manifest['seed'] == 5
        assert manifest['config']['grid']['seed'] == 5
        assert manifest['schema_version'] == 1
        assert manifest['config']['settings'] == {}

    def test_existing_output_needs_overwrite(self):
        with patch('pscausal.commands.preset', side_effect=_tiny_preset):
            assert self._invoke('simulate-linear', '--seed', '5').exit_code == 0
            table = self._read('linear.csv')
            manifest = self._read('manifest.json')

            refused = self._invoke('simulate-linear', '--seed', '5')
            assert refused.exit_code == 1
            assert 'overwrite' in refused.output

            again = self._invoke('simulate-linear', '--seed', '5', '--overwrite')
            assert again.exit_code == 0

        assert self._read('linear.csv') == table
        assert self._read('manifest.json') == manifest

    def test_seed_required(self):
        result = self._invoke('simulate-linear')

        assert result.exit_code == 2
        assert 'seed' in result.output

    def test_seed_from_configuration(self):
        self.app.config['SEED'] = 9
        with patch('pscausal.commands.preset', side_effect=_tiny_preset):
            result = self._invoke('simulate-linear')

        assert result.exit_code == 0, result.output
        assert json.loads(self._read('manifest.json').decode('utf-8'))['seed'] == 9

    def test_simulate_binary(self):
        with patch('pscausal.simulation.binary.run_replicate', side_effect=_summaries):
            result = self._invoke('simulate-binary', '--seed', '1', '--replicates', '3', '--tw-case', '3')

        assert result.exit_code == 0, result.output
        summary = json.loads(self._read('binary_summary.json').decode('utf-8'))
        assert summary['replicates'] == 3
        assert summary['config']['tw_case'] == 3
        assert summary['smd_exceed_rate'] == {'PS1': 0.0, 'PS2': 0.0}
        assert os.path.exists(self._output('binary.csv'))

        settings = json.loads(self._read('manifest.json').decode('utf-8'))['config']['settings']
        assert settings == {'RHAT_THRESHOLD': 10.0, 'MAX_NONCONVERGED_FRACTION': 0.2, 'SMD_THRESHOLD': 0.1}

    def test_invalid_case(self):
        result = self._invoke('simulate-binary', '--seed', '1', '--tw-case', '4')

        assert result.exit_code == 2
        assert not os.path.exists(self._output('binary.csv'))

    def test_unknown_outcome_model(self):
        result = self._invoke('fit', '--data', self.data, '--outcome', 'M99', '--seed', '1')

        assert result.exit_code == 2
        assert 'M15' in result.output

    def test_spatial_model_needs_centroids(self):
        result = self._invoke('fit', '--data', self.data, '--outcome', 'M3', '--seed', '1')

        assert result.exit_code == 2
        assert 'centroids' in result.output

    def test_fit_writes_report(self):
        self.app.config['SMD_THRESHOLD'] = 0.25
        self.app.config['TB_DELIMITER'] = ';'
        result = self._invoke('fit', '--data', self.data, '--outcome', 'M1', '--seed', '4', '--iters', '300',
                              '--warmup', '100')

        assert result.exit_code == 0, result.output
        report = json.loads(self._read('report.json').decode('utf-8'))
        assert report['models']['outcome']['model'] == 'M1'
        assert report['seed'] == 4
        assert report['fit']['waic'] is not None

        draws = pd.read_csv(self._output('draws.csv'))
        assert list(draws.columns) == ['chain', 'iter', '(Intercept)', 'Z']
        assert len(draws) == 2 * 200

        ledger = json.loads(self._read('ledger.json').decode('utf-8'))
        assert ledger['raw'] == 150
        assert ledger['retained'] + sum(ledger['excluded'].values()) == 150
        assert ledger['cohort']['min_age'] == 11

        settings = json.loads(self._read('manifest.json').decode('utf-8'))['config']['settings']
        assert settings['SMD_THRESHOLD'] == 0.25
        assert settings['TB_DELIMITER'] == ';'
        assert settings['TB_COLUMN_MAP'] == {}
        assert settings['COEFFICIENT_PRIORS'] == {}
        assert settings['PARETO_K_THRESHOLD'] == 0.7
        assert settings['SEPARATION_EPS'] == 1e-6
        assert settings['FIXED_EFFECT_SD'] == 10.0

    def test_balance(self):
        with patch('pscausal.commands.estimate_propensity', wraps=estimate_propensity) as fitted:
            result = self._invoke('balance', '--data', self.data, '--models', 'PS1', '--seed', '2', '--iters', '300',
                                  '--warmup', '100')

        assert result.exit_code == 0, result.output
        table = pd.read_csv(self._output('balance.csv'))
        assert list(table.columns) == ['covariate', 'Unweighted', 'Weighted-PS1']
        positivity = json.loads(self._read('positivity.json').decode('utf-8'))
        assert list(positivity) == ['PS1']
        assert fitted.call_args[1]['diagnose'] is False
        assert 'TB_COLUMN_MAP' in json.loads(self._read('manifest.json').decode('utf-8'))['config']['settings']

    def test_balance_rejects_outcome_models(self):
        result = self._invoke('balance', '--data', self.data, '--models', 'M1', '--seed', '2')

        assert result.exit_code == 2

    def test_compare_outcome_models(self):
        result = self._invoke('compare', '--data', self.data, '--models', 'M1,M4', '--seed', '3', '--iters', '300',
                              '--warmup', '100')

        assert result.exit_code == 0, result.output
        table = pd.read_csv(self._output('compare.csv'))
        assert list(table['model']) == ['M1', 'M4']
        assert (table['waic'] > 0).all()

    def test_compare_model_lists(self):
        empty = self._invoke('compare', '--data', self.data, '--models', '', '--seed', '3')
        mixed = self._invoke('compare', '--data', self.data, '--models', 'PS1,M1', '--seed', '3')
        repeated = self._invoke('compare', '--data', self.data, '--models', 'M1,M1', '--seed', '3')

        assert empty.exit_code == 2
        assert mixed.exit_code == 2
        assert repeated.exit_code == 2

    def test_output_directory_resolved_at_run_time(self):
        self.app.config['OUTPUT_DIR'] = None
        target = os.path.join(self.tmp, 'late')

        with patch.dict(os.environ, {'PSCAUSAL_OUTPUT_DIR': target}):
            with patch('pscausal.commands.preset', side_effect=_tiny_preset):
                result = self._invoke('simulate-linear', '--seed', '5')

        assert result.exit_code == 0, result.output
        assert os.path.exists(os.path.join(target, 'linear.csv'))

    def test_default_output_dir_follows_working_directory(self):
        environ = dict((k, v) for k, v in os.environ.items() if k != 'PSCAUSAL_OUTPUT_DIR')

        with patch.dict(os.environ, environ, clear=True):
            with patch('pscausal.utils.os.getcwd', return_value=self.tmp):
                assert default_output_dir() == os.path.join(self.tmp, 'output')
