# -*- coding: utf-8 -*-
"""
    Command-line surface: simulate-linear, simulate-binary, fit, balance and
    compare. Flags override the app configuration, which overrides the
    defaults in config.py.
"""

import functools

import click

from flask import current_app
from flask.cli import with_appcontext

from .core import PriorSpec
from .diagnostics import balance_table, compare_fits, positivity_summary
from .errors import PsCausalError
from .exporter import Exporter
from .mcmc import McmcSettings
from .pipeline import (PROPENSITY_MODELS, OUTCOME_MODELS, PropensityModelKind, OutcomeModelKind, estimate_propensity,
                       two_step, POSTERIOR_MEAN_PARAMS, POSTERIOR_MEAN_PS)
from .pipeline.constants import PROPENSITY_STAGE
from .pipeline.two_step import stage_settings
from .simulation import PRESETS, DESK, X_SCENARIOS, TW_CASES, BinarySimConfig, preset, run_linear_grid, \
    run_binary_study
from .simulation.constants import DESK_REPLICATES
from .tb import CohortSpec, load, derive_cohort, attach_geography
from .utils import default_output_dir

LINEAR_CSV = 'linear.csv'
BINARY_CSV = 'binary.csv'
BINARY_SUMMARY = 'binary_summary.json'
REPORT = 'report.json'
DRAWS = 'draws.csv'
LEDGER = 'ledger.json'
BALANCE = 'balance.csv'
POSITIVITY = 'positivity.json'
COMPARE = 'compare.csv'

# Configuration keys that change the bytes of each command's output.
BINARY_SETTINGS = ('RHAT_THRESHOLD', 'MAX_NONCONVERGED_FRACTION', 'SMD_THRESHOLD')
DATA_SETTINGS = ('RHAT_THRESHOLD', 'FIXED_EFFECT_SD', 'RE_SCALE_PRIOR', 'JITTER', 'COEFFICIENT_PRIORS',
                 'SEPARATION_EPS', 'SMD_THRESHOLD', 'PARETO_K_THRESHOLD', 'TB_DELIMITER', 'TB_COLUMN_MAP')


def _setting(value, key):
    """Flag value when given, else the app configuration."""
    return current_app.config[key] if value is None else value


def _require_seed(seed):
    seed = _setting(seed, 'SEED')
    if seed is None:
        raise click.UsageError('a seed is required: pass --seed or set SEED in the configuration')
    return int(seed)


def _mcmc_settings(seed, chains, iters, warmup, workers):
    return McmcSettings(chains=_setting(chains, 'CHAINS'), iters=_setting(iters, 'ITERS'),
                        warmup=_setting(warmup, 'WARMUP'), seed=seed, workers=workers,
                        rhat_threshold=current_app.config['RHAT_THRESHOLD'])


def _priors():
    config = current_app.config
    return PriorSpec(fixed_effect_sd=config['FIXED_EFFECT_SD'], re_scale_prior=config['RE_SCALE_PRIOR'],
                     jitter=config['JITTER'], coefficient_priors=config['COEFFICIENT_PRIORS'])


def _exporter(out, overwrite):
    return Exporter(out or current_app.config['OUTPUT_DIR'] or default_output_dir(), overwrite=overwrite)


def _manifest(exporter, command, options, seed, keys=()):
    config = current_app.config
    options = dict(options, settings=dict((key, config[key]) for key in keys))
    exporter.write_manifest(command, options, seed, config['VERSION'], config['MANIFEST_SCHEMA_VERSION'])


def _model_list(ctx, param, value):
    names = [name.strip() for name in (value or '').split(',') if name.strip()]
    if not names:
        raise click.BadParameter('the model list is empty')

    if all(name in PROPENSITY_MODELS for name in names) or all(name in OUTCOME_MODELS for name in names):
        if len(set(names)) != len(names):
            raise click.BadParameter('duplicate model ids in {0}'.format(value))
        return names

    valid = list(PROPENSITY_MODELS) + sorted(OUTCOME_MODELS, key=lambda k: int(k[1:]))
    raise click.BadParameter('expected only PS ids or only M ids from: {0}'.format(', '.join(valid)))


def _outcome_model(ctx, param, value):
    try:
        return OutcomeModelKind.from_name(value)
    except PsCausalError as err:
        raise click.BadParameter(str(err))


def reports_errors(func):
    """Turn library failures into exit status 1 with a one-line message."""

    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PsCausalError as err:
            current_app.logger.error('{0} failed: {1}'.format(func.__name__, err), exc_info=True)
            raise click.ClickException(str(err))

    return wrapped


def run_options(func):
    """Options shared by every command."""
    options = [
        click.option('--seed', type=int, default=None, help='Root seed of every random stream.'),
        click.option('--out', type=click.Path(file_okay=False), default=None, help='Output directory.'),
        click.option('--overwrite', is_flag=True, help='Replace existing output files.'),
        click.option('--workers', type=click.IntRange(min=1), default=None, help='Worker processes.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def budget_options(func):
    options = [
        click.option('--chains', type=click.IntRange(min=1), default=None),
        click.option('--iters', type=click.IntRange(min=2), default=None),
        click.option('--warmup', type=click.IntRange(min=1), default=None),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def data_options(func):
    options = [
        click.option('--data', type=click.Path(exists=True, dir_okay=False), required=True,
                     help='Notification file (comma or semicolon delimited).'),
        click.option('--centroids', type=click.Path(exists=True, dir_okay=False), default=None,
                     help='city_id,x,y table of cluster centroids.'),
        click.option('--standardize', is_flag=True, help='Standardize age and HDI.'),
        click.option('--complete-case', is_flag=True, help='Drop rows with a missing optional covariate.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _cohort(data, centroids, standardize, complete_case):
    config = current_app.config
    records = load(data, column_map=config['TB_COLUMN_MAP'], delimiter=config['TB_DELIMITER'])
    dataset = derive_cohort(records, CohortSpec(standardize=standardize, complete_case=complete_case))
    if centroids:
        dataset = attach_geography(dataset, centroids)
    return dataset


def _spatial_models(ps_names=(), outcome_kinds=()):
    names = [kind.name for kind in outcome_kinds if kind.requires_centroids]
    ps_names = list(ps_names) + [kind.ps_kind for kind in outcome_kinds if kind.requires_ps]
    names.extend(name for name in ps_names if name and PropensityModelKind(name).requires_centroids)
    return sorted(set(names))


def _needs_centroids(dataset, names):
    if dataset.centroids is None and names:
        raise click.UsageError('{0} use spatial cluster effects; pass --centroids'.format(', '.join(names)))


@click.command('simulate-linear')
@click.option('--preset', 'preset_name', type=click.Choice(PRESETS), default=DESK, show_default=True)
@click.option('--replicates', type=click.IntRange(min=1), default=None)
@click.option('--mu-t', type=float, default=0.0, show_default=True)
@click.option('--mu-w', type=float, default=0.0, show_default=True)
@click.option('--zero-intercept', is_flag=True, help='Fit the outcome model without an intercept.')
@run_options
@with_appcontext
@reports_errors
def simulate_linear(preset_name, replicates, mu_t, mu_w, zero_intercept, seed, out, overwrite, workers):
    """Exact bias and RMSE of the linear Gaussian designs over a grid."""
    seed = _require_seed(seed)
    workers = _setting(workers, 'WORKERS')

    changes = dict(mu_T=mu_t, mu_W=mu_w, zero_intercept=zero_intercept, seed=seed)
    if replicates is not None:
        changes['replicates'] = replicates
    spec = preset(preset_name, **changes)

    exporter = _exporter(out, overwrite)
    exporter.claim(LINEAR_CSV, Exporter.MANIFEST)

    table = run_linear_grid(spec, workers=workers)
    exporter.write_csv(LINEAR_CSV, table)
    _manifest(exporter, 'simulate-linear', dict(preset=preset_name, grid=spec.as_dict()), seed)
    click.echo('{0} cells written to {1}'.format(len(spec.cells()), exporter.path(LINEAR_CSV)))


@click.command('simulate-binary')
@click.option('--x-scenario', type=click.Choice([str(k) for k in sorted(X_SCENARIOS)]), default='1',
              show_default=True)
@click.option('--tw-case', type=click.Choice([str(k) for k in sorted(TW_CASES)]), default='1', show_default=True)
@click.option('--m', 'm', type=click.IntRange(min=2), default=50, show_default=True, help='Number of clusters.')
@click.option('--n', 'n', type=click.IntRange(min=1), default=4, show_default=True, help='Units per cluster.')
@click.option('--replicates', type=click.IntRange(min=1), default=DESK_REPLICATES, show_default=True)
@click.option('--mu-t', type=float, default=0.0, show_default=True)
@click.option('--mu-w', type=float, default=0.0, show_default=True)
@budget_options
@run_options
@with_appcontext
@reports_errors
def simulate_binary(x_scenario, tw_case, m, n, replicates, mu_t, mu_w, chains, iters, warmup, seed, out, overwrite,
                    workers):
    """Two-step logistic models MD1-MD4 on simulated binary data."""
    seed = _require_seed(seed)
    workers = _setting(workers, 'WORKERS')

    cfg = BinarySimConfig(m=m, n=n, x_scenario=int(x_scenario), tw_case=int(tw_case), mu_T=mu_t, mu_W=mu_w,
                          replicates=replicates, seed=seed)
    settings = _mcmc_settings(seed, chains, iters, warmup, 1)

    exporter = _exporter(out, overwrite)
    exporter.claim(BINARY_CSV, BINARY_SUMMARY, Exporter.MANIFEST)

    result = run_binary_study(cfg, settings, workers=workers,
                              max_nonconverged_fraction=current_app.config['MAX_NONCONVERGED_FRACTION'],
                              smd_threshold=current_app.config['SMD_THRESHOLD'])
    exporter.write_csv(BINARY_CSV, result.frame())
    exporter.write_json(BINARY_SUMMARY, result.as_dict())
    _manifest(exporter, 'simulate-binary', dict(study=cfg.as_dict(), mcmc=settings.as_dict()), seed,
              BINARY_SETTINGS)
    click.echo('{0} replicates, {1} excluded'.format(result.total, len(result.excluded)))


@click.command('fit')
@data_options
@click.option('--ps', 'ps_name', type=click.Choice(PROPENSITY_MODELS), default=None,
              help='Exposure model; implied by PS-adjusted outcome models.')
@click.option('--outcome', 'outcome_kind', required=True, callback=_outcome_model, help='Outcome model id, M1-M15.')
@click.option('--ps-point', type=click.Choice([POSTERIOR_MEAN_PARAMS, POSTERIOR_MEAN_PS]),
              default=POSTERIOR_MEAN_PARAMS, show_default=True)
@budget_options
@run_options
@with_appcontext
@reports_errors
def fit(data, centroids, standardize, complete_case, ps_name, outcome_kind, ps_point, chains, iters, warmup, seed,
        out, overwrite, workers):
    """Plug-in two-step fit of one outcome model on the TB cohort."""
    seed = _require_seed(seed)
    workers = _setting(workers, 'WORKERS')
    settings = _mcmc_settings(seed, chains, iters, warmup, workers)
    priors = _priors()

    dataset = _cohort(data, centroids, standardize, complete_case)
    _needs_centroids(dataset, _spatial_models([ps_name], [outcome_kind]))

    exporter = _exporter(out, overwrite)
    exporter.claim(REPORT, DRAWS, LEDGER, Exporter.MANIFEST)

    config = current_app.config
    report = two_step(dataset, ps_name, outcome_kind, settings=settings, priors=priors, ps_point=ps_point,
                      smd_threshold=config['SMD_THRESHOLD'], k_threshold=config['PARETO_K_THRESHOLD'])

    exporter.write_json(REPORT, report.as_dict())
    exporter.write_csv(DRAWS, report.sample.to_frame())
    exporter.write_json(LEDGER, dict(dataset.extras['ledger'].as_dict(), cohort=dataset.extras['cohort'].as_dict()))
    _manifest(exporter, 'fit', dict(data=data, centroids=centroids, ps=ps_name, outcome=outcome_kind.name,
                                    ps_point=ps_point, mcmc=settings.as_dict(), priors=priors.as_dict(),
                                    standardize=standardize, complete_case=complete_case), seed, DATA_SETTINGS)
    click.echo('{0}: ATE {1:.4f}, OR {2:.3f}'.format(outcome_kind.name, report.ate.ate_mean, report.ate.or_mean))


def _propensities(dataset, names, settings, priors, diagnose=False):
    stage = stage_settings(settings, PROPENSITY_STAGE)
    return [estimate_propensity(dataset, name, priors=priors, settings=stage,
                                separation_eps=current_app.config['SEPARATION_EPS'], diagnose=diagnose)
            for name in names]


@click.command('balance')
@data_options
@click.option('--models', default=','.join(PROPENSITY_MODELS[:2]), show_default=True, callback=_model_list,
              help='Comma-separated exposure models.')
@budget_options
@run_options
@with_appcontext
@reports_errors
def balance(data, centroids, standardize, complete_case, models, chains, iters, warmup, seed, out, overwrite,
            workers):
    """Unweighted and ATE-weighted SMDs of every covariate."""
    if any(name not in PROPENSITY_MODELS for name in models):
        raise click.BadParameter('balance takes exposure models only', param_hint='--models')

    seed = _require_seed(seed)
    settings = _mcmc_settings(seed, chains, iters, warmup, _setting(workers, 'WORKERS'))
    priors = _priors()

    dataset = _cohort(data, centroids, standardize, complete_case)
    _needs_centroids(dataset, _spatial_models(models))

    exporter = _exporter(out, overwrite)
    exporter.claim(BALANCE, POSITIVITY, Exporter.MANIFEST)

    estimates = _propensities(dataset, models, settings, priors)
    report = balance_table(dataset, estimates, threshold=current_app.config['SMD_THRESHOLD'])

    exporter.write_csv(BALANCE, report.to_frame())
    exporter.write_json(POSITIVITY, dict((e.name, positivity_summary(e.ps, dataset.exposure)) for e in estimates))
    _manifest(exporter, 'balance', dict(data=data, centroids=centroids, models=models, mcmc=settings.as_dict(),
                                        priors=priors.as_dict(), standardize=standardize,
                                        complete_case=complete_case), seed, DATA_SETTINGS)
    for column in report.columns:
        flagged = report.exceeds(column)
        click.echo('{0}: {1}'.format(column, ', '.join(flagged) if flagged else 'balanced'))


@click.command('compare')
@data_options
@click.option('--models', required=True, callback=_model_list,
              help='Comma-separated exposure models (PS1,...) or outcome models (M1,...).')
@budget_options
@run_options
@with_appcontext
@reports_errors
def compare(data, centroids, standardize, complete_case, models, chains, iters, warmup, seed, out, overwrite,
            workers):
    """WAIC and PSIS-LOO of several exposure or outcome models."""
    seed = _require_seed(seed)
    settings = _mcmc_settings(seed, chains, iters, warmup, _setting(workers, 'WORKERS'))
    priors = _priors()
    config = current_app.config

    dataset = _cohort(data, centroids, standardize, complete_case)

    exporter = _exporter(out, overwrite)

    if models[0] in PROPENSITY_MODELS:
        _needs_centroids(dataset, _spatial_models(models))
        exporter.claim(COMPARE, Exporter.MANIFEST)
        fits = [(e.name, e.fit) for e in _propensities(dataset, models, settings, priors, diagnose=True)]
    else:
        kinds = [OutcomeModelKind.from_name(name) for name in models]
        _needs_centroids(dataset, _spatial_models(outcome_kinds=kinds))
        exporter.claim(COMPARE, Exporter.MANIFEST)

        needed = sorted(set(k.ps_kind for k in kinds if k.requires_ps))
        cache = dict(zip(needed, _propensities(dataset, needed, settings, priors)))

        fits = []
        for kind in kinds:
            report = two_step(dataset, None, kind, settings=settings, priors=priors,
                              propensity=cache.get(kind.ps_kind), smd_threshold=config['SMD_THRESHOLD'],
                              k_threshold=config['PARETO_K_THRESHOLD'])
            fits.append((kind.name, report.fit))

    table = compare_fits(fits)
    exporter.write_csv(COMPARE, table)
    _manifest(exporter, 'compare', dict(data=data, centroids=centroids, models=models, mcmc=settings.as_dict(),
                                        priors=priors.as_dict(), standardize=standardize,
                                        complete_case=complete_case), seed, DATA_SETTINGS)
    click.echo(table.to_string(index=False))


COMMANDS = [simulate_linear, simulate_binary, fit, balance, compare]
