#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import functools
import sys

from typing import Any, Dict, List, Optional, Sequence, Set

import click
import numpy as np
import pandas as pd

from rarekit import __version__, config
from rarekit.config import RunConfig, parse_overrides, read_config_file
from rarekit.constants import (
    CriterionKind,
    DEFAULT_ALPHA,
    DEFAULT_ALPHA_GRID,
    DEFAULT_BANDWIDTH,
    DEFAULT_EPOCHS,
    DEFAULT_GAMMA,
    DEFAULT_GENERATIONS,
    DEFAULT_NEIGHBOURS,
    DEFAULT_POPULATION,
    DEFAULT_ROUNDS,
    DEFAULT_SEED,
    DEFAULT_TAU,
    DEFAULT_TREES,
    DEFAULT_UNIVERSES,
    DEFAULT_WORKERS,
    ENV_PREFIX,
    KernelKind,
    LagoVariant,
    Stream,
)
from rarekit.controller import GLOBAL_KEYS, Rarekit
from rarekit.ensembles.boosting import adaboost, boosting_grid, tree_learner
from rarekit.ensembles.forest import bagging, forest_grid, random_forest
from rarekit.exceptions import ConfigException, RarekitException
from rarekit.experiments import load_experiments
from rarekit.kernels.core import KernelSpec, gram
from rarekit.kernels.kpca import fit_kpca, project
from rarekit.kernels.lago import LagoModel, fit_lago, rank, tune_alpha
from rarekit.kernels.svm import (
    check_canonical,
    empirical_margin,
    gamma_to_lambda,
    margin,
    sensitivity_grid,
    train_kernel_hinge,
)
from rarekit.logger import KitLogger
from rarekit.metrics import evaluate_ranking, misclassification
from rarekit.selection.criterion import (
    CriterionSpec,
    SubsetMask,
    exhaustive_search,
    group_gap,
)
from rarekit.selection.evolution import GAParams, evolve, stepwise
from rarekit.selection.voting import bagged_stepwise, parallel_universes
from rarekit.utils import message, parse_list

logger = KitLogger()

PROG_NAME = 'rarekit'

SELECT_MODES = ('exhaustive', 'evolve', 'stepwise', 'universes', 'bagged-stepwise')


def _command_path(ctx: click.Context) -> List[str]:
    path = []
    while ctx.parent is not None:
        path.insert(0, ctx.info_name)
        ctx = ctx.parent
    return path


def pass_kit(func):
    """
    Hands the callback a Rarekit controller bound to the invoked command and
    its resolved parameters. A command level --seed is consumed by the
    controller and not passed on.
    """
    @click.pass_context
    @functools.wraps(func)
    def wrapper(ctx, **kwargs):
        kit = Rarekit(_command_path(ctx), ctx.params)
        kwargs.pop('seed', None)
        return func(kit, **kwargs)
    return wrapper


SEED_HELP = 'Master seed for this command, replaces the global --seed'


def seed_option(func):
    return click.option('--seed', type=int, help=SEED_HELP)(func)


def data_options(func):
    """
    Dataset options shared by the supervised commands.
    """
    options = [
        click.option('--data', required=True, help='CSV file with a header row'),
        click.option('--label', default='y', show_default=True,
                     help='Name of the response column'),
        click.option('--label-coding',
                     help='Raw label to -1/+1 mapping, i.e. "spam=1,ham=-1"'),
        click.option('--test', 'test_data', help='CSV file to evaluate on'),
        click.option('--train-fraction', type=float,
                     help='Split --data into train and test parts instead'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def kernel_options(func):
    options = [
        click.option('--kernel', type=click.Choice([k.value for k in KernelKind]),
                     default=KernelKind.Gaussian.value, show_default=True,
                     help='Kernel function'),
        click.option('--h', type=float, default=DEFAULT_BANDWIDTH, show_default=True,
                     help='Gaussian bandwidth, exp(-h ||u - v||^2)'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def criterion_options(func):
    options = [
        click.option('--criterion', type=click.Choice([k.value for k in CriterionKind]),
                     default=CriterionKind.AIC.value, show_default=True,
                     help='Selection criterion'),
        click.option('--gamma', type=float, help='Penalty of the custom criterion'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _evaluation_frame(ds, decision, predictions, label: str) -> pd.DataFrame:
    return pd.DataFrame({
        'row_id': np.arange(1, ds.n + 1),
        'decision': decision,
        'prediction': predictions,
        label: ds.labels,
    })


def predict_command(group: click.Group, kind: str) -> click.Command:
    """
    Adds a "predict" subcommand applying a model saved by the group's "fit"
    to new points.
    """
    @group.command('predict', help=f'Apply a saved {kind} model to new points')
    @click.option('--model', 'model_path', required=True,
                  help=f'Model file written by "{kind} fit"')
    @click.option('--data', required=True, help='CSV file with the points to classify')
    @click.option('--label', default='y', show_default=True,
                  help='Label column, used for evaluation when present')
    @click.option('--label-coding',
                  help='Raw label to -1/+1 mapping, i.e. "spam=1,ham=-1"')
    @pass_kit
    def predict(kit, model_path, data, label, label_coding):
        model, names = kit.load_model(model_path, kind)
        features, labels = kit.load_new_points(data, label, label_coding, names)
        predictions = model.predict(features)
        frame = pd.DataFrame({
            'row_id': np.arange(1, features.shape[0] + 1),
            'decision': model.decision_function(features),
            'prediction': predictions,
        })
        summary = {'n_eval': features.shape[0]}
        if labels is not None:
            frame[label] = labels
            summary['errors'] = misclassification(predictions, labels)
        kit.write(frame, f'{kind}_predictions.csv')
        kit.summary(f'{kind}_predict_summary', summary)

    return predict


def _flatten_defaults(values: Dict[str, Any]) -> Dict[str, Any]:
    flat = {}
    for key, value in values.items():
        if isinstance(value, (list, tuple)):
            value = ','.join(str(v) for v in value)
        flat[key] = value
    return flat


def _default_map(ctx: click.Context, command: click.Command,
                 values: Dict[str, Any], known: Set[str]) -> Dict[str, Any]:
    """
    Nested click default map that offers the flat config values to every
    command in the tree. Collects the parameter names seen into known.
    """
    known.update(param.name for param in command.params)
    mapping = dict(values)
    if isinstance(command, click.Group):
        for name in command.list_commands(ctx):
            sub_command = command.get_command(ctx, name)
            if sub_command is not None:
                mapping[name] = _default_map(ctx, sub_command, values, known)
    return mapping


@click.group()
@click.option('--project-dir', help='Root directory for project')
@click.option('--out-dir', help='Directory for CSV artifacts and the run manifest')
@click.option('--data-dir', help='Fallback directory for relative dataset paths')
@click.option('--seed', type=int, help=f'Master seed  [default: {DEFAULT_SEED}]')
@click.option('--workers', type=int,
              help=f'Number of parallel workers  [default: {DEFAULT_WORKERS}]')
@click.option('--config', 'config_file',
              help='Flat YAML file with default values for any option')
@click.option('--set', 'overrides', multiple=True,
              help='Override a config value, i.e. --set B=20. Repeatable')
@click.version_option(__version__, prog_name=PROG_NAME)
@click.pass_context
def cli(ctx, project_dir, out_dir, data_dir, seed, workers, config_file, overrides):
    """
    Rarekit: kernel methods, tree ensembles and variable selection.

    Values are taken from command line flags, then RAREKIT_* environment
    variables, then the --config file and --set overrides, then defaults.
    """
    values = read_config_file(config_file) if config_file else {}
    values.update(parse_overrides(list(overrides)))
    values = _flatten_defaults(values)

    def pick(name, flag, default):
        return flag if flag is not None else values.pop(name, default)

    config.load(
        project_dir=pick('project_dir', project_dir, None),
        out_dir=pick('out_dir', out_dir, None),
        data_dir=pick('data_dir', data_dir, None),
        seed=int(pick('seed', seed, DEFAULT_SEED)),
        workers=int(pick('workers', workers, DEFAULT_WORKERS)),
    )
    KitLogger.attach_file_handler()
    if values:
        known = set()
        ctx.default_map = _default_map(ctx, ctx.command, values, known)
        unknown = sorted(set(values) - known)
        if unknown:
            logger.warning(f'Ignoring config keys no command uses: {unknown}')


@cli.command()
@click.option('--data', required=True, help='CSV file with a header row')
@click.option('--label', default='y', show_default=True,
              help='Numeric column carried through to the scores table')
@kernel_options
@click.option('--q', type=int, default=2, show_default=True, help='Number of components')
@click.option('--tol-eig', type=float,
              help='Eigenvalue cutoff  [default: 1e-10 times the largest]')
@click.option('--new-data', help='CSV with points to project onto the components')
@click.option('--export-gram', is_flag=True,
              help='Also write the uncentered training Gram matrix as kpca_gram.csv')
@pass_kit
def kpca(kit, data, label, kernel, h, q, tol_eig, new_data, export_gram):
    """
    Kernel principal components
    """
    ds = kit.load(data, label, regression=True)
    model = fit_kpca(ds, KernelSpec(kernel, h), q, tol_eig=tol_eig)
    if export_gram:
        kit.write(gram(model.spec, ds.features).to_frame(), 'kpca_gram.csv')

    def scores_frame(target, values):
        frame = pd.DataFrame({'row_id': np.arange(1, target.n + 1)})
        for j in range(model.q):
            frame[f'pc{j + 1}'] = values[:, j]
        frame[label] = target.response
        return frame

    kit.write(scores_frame(ds, model.training_scores), 'kpca_scores.csv')
    kit.write(pd.DataFrame({
        'component': np.arange(1, model.q + 1),
        'eigenvalue': model.eigenvalues,
    }), 'kpca_eigenvalues.csv')
    if new_data:
        new = kit.load(new_data, label, regression=True)
        kit.write(scores_frame(new, project(model, new.features)), 'kpca_projection.csv')
    kit.summary('kpca_summary', {
        'n': ds.n,
        'kernel': model.spec.kind.value,
        'requested': q,
        'components': model.q,
        'status': model.status.value,
    })


@cli.group()
def svm():
    """
    Kernel hinge-loss classifier
    """


@svm.command('fit')
@data_options
@kernel_options
@click.option('--cost', type=float, default=DEFAULT_GAMMA, show_default=True,
              help='Cost parameter gamma, the ridge weight is 1 / (2 gamma)')
@click.option('--epochs', type=int, default=DEFAULT_EPOCHS, show_default=True,
              help='Passes over the training data')
@seed_option
@pass_kit
def svm_fit(kit, data, label, label_coding, test_data, train_fraction, kernel, h,
            cost, epochs):
    """
    Train a classifier and evaluate it
    """
    train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
    spec = KernelSpec(kernel, h)
    model = train_kernel_hinge(train, spec, gamma_to_lambda(cost), epochs=epochs,
                               seed=kit.stream_seed(Stream.Model))
    kit.write(pd.DataFrame({
        'epoch': np.arange(len(model.objective_history)),
        'objective': model.objective_history,
        'best': model.best_history,
    }), 'svm_history.csv')

    target = test if test is not None else train
    decision = model.decision_function(target.features)
    predictions = np.where(decision >= 0, 1, -1)
    kit.save_model(model, 'svm_model.npz', train.feature_names)
    kit.write(_evaluation_frame(target, decision, predictions, label), 'svm_predictions.csv')

    summary = {
        'n_train': train.n,
        'n_eval': target.n,
        'evaluated_on': 'test' if test is not None else 'train',
        'lambda': model.lam,
        'objective': model.objective,
        'best_epoch': model.best_epoch,
        'errors': misclassification(predictions, target.labels),
    }
    if spec.kind == KernelKind.Linear and np.any(model.coefficients):
        hyperplane = model.hyperplane()
        summary['margin'] = margin(hyperplane)
        summary['empirical_margin'] = empirical_margin(hyperplane, train)
        summary['canonical'] = check_canonical(hyperplane, train).value
    kit.summary('svm_summary', summary)


@svm.command('grid')
@data_options
@click.option('--gammas', default='0.1,1,10,100', show_default=True,
              help='Cost parameters')
@click.option('--hs', default='0.001,0.01,0.1,1', show_default=True,
              help='Gaussian kernel bandwidths')
@click.option('--epochs', type=int, default=DEFAULT_EPOCHS, show_default=True,
              help='Passes over the training data')
@seed_option
@pass_kit
def svm_grid(kit, data, label, label_coding, test_data, train_fraction, gammas, hs, epochs):
    """
    Test errors over a grid of cost parameters and bandwidths
    """
    train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
    if test is None:
        raise ConfigException('The grid needs --test or --train-fraction')
    grid = sensitivity_grid(train, test, parse_list(gammas), parse_list(hs),
                            seed=kit.stream_seed(Stream.Model), epochs=epochs)
    kit.write(grid, 'svm_grid.csv')
    best = grid.loc[grid['errors'].idxmin()]
    kit.summary('svm_grid_summary', {
        'cells': len(grid),
        'best_gamma': float(best['gamma']),
        'best_h': float(best['h']),
        'best_errors': int(best['errors']),
    })


predict_command(svm, 'svm')


@cli.group()
def lago():
    """
    Rare-target ranking
    """


def lago_options(func):
    options = [
        click.option('--K', 'K', type=int, default=DEFAULT_NEIGHBOURS, show_default=True,
                     help='Background neighbours per center'),
        click.option('--variant', type=click.Choice([v.value for v in LagoVariant]),
                     default=LagoVariant.Spherical.value, show_default=True,
                     help='Spherical or elliptical radii'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def lago_fit_options(func):
    options = [
        click.option('--alpha', type=float, default=DEFAULT_ALPHA, show_default=True,
                     help='Bandwidth multiplier'),
        click.option('--tune', is_flag=True,
                     help='Pick alpha by cross-validation on the training data'),
        click.option('--alphas', default=','.join(f'{a:g}' for a in DEFAULT_ALPHA_GRID),
                     show_default=True, help='Candidate alphas for --tune'),
        click.option('--folds', type=int, default=5, show_default=True,
                     help='Folds for --tune'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _fit_lago_model(kit, train, K, variant, alpha, tune, alphas, folds) -> LagoModel:
    if tune:
        tuning = tune_alpha(train, K=K, alphas=parse_list(alphas), folds=folds,
                            seed=kit.stream_seed(Stream.Model), variant=variant)
        kit.write(tuning.to_frame(), 'lago_tuning.csv')
        alpha = tuning.best_alpha
    return fit_lago(train, K=K, alpha=alpha, variant=variant)


@lago.command('fit')
@click.option('--data', required=True, help='CSV file with a header row')
@click.option('--label', default='y', show_default=True, help='Name of the response column')
@click.option('--label-coding', help='Raw label to -1/+1 mapping, i.e. "spam=1,ham=-1"')
@lago_options
@lago_fit_options
@seed_option
@pass_kit
def lago_fit(kit, data, label, label_coding, K, variant, alpha, tune, alphas, folds):
    """
    Fit on rare-class data and save the model for "lago rank --model"
    """
    ds = kit.load(data, label, label_coding)
    model = _fit_lago_model(kit, ds, K, variant, alpha, tune, alphas, folds)
    kit.save_model(model, 'lago_model.npz', ds.feature_names)

    frame = pd.DataFrame({'center': np.arange(1, model.centers.shape[0] + 1)})
    for j, name in enumerate(ds.feature_names):
        frame[name] = model.centers[:, j]
    if model.variant == LagoVariant.Spherical:
        frame['radius'] = model.radii
    else:
        for j, name in enumerate(ds.feature_names):
            frame[f'radius_{name}'] = model.radii[:, j]
    kit.write(frame, 'lago_centers.csv')
    kit.summary('lago_fit_summary', {
        'centers': model.centers.shape[0],
        'K': model.K,
        'variant': model.variant.value,
        'alpha': model.alpha,
        'r_floor': model.r_floor,
        'floored': int(np.sum(model.radii <= model.r_floor)),
    })


@lago.command('rank')
@data_options
@lago_options
@lago_fit_options
@click.option('--model', 'model_path',
              help='Rank every row of --data with a model saved by "lago fit" instead')
@click.option('--cutoffs', default='10,50,100', show_default=True,
              help='Cutoffs for hits at k')
@seed_option
@pass_kit
def lago_rank(kit, data, label, label_coding, test_data, train_fraction, K, variant,
              alpha, tune, alphas, folds, model_path, cutoffs):
    """
    Fit on rare-class data and rank the evaluation rows
    """
    if model_path:
        if tune or test_data or train_fraction is not None:
            raise ConfigException('--model ranks --data as is, drop --tune, --test and '
                                  '--train-fraction')
        model, names = kit.load_model(model_path, 'lago')
        features, labels = kit.load_new_points(data, label, label_coding, names)
        evaluated_on = 'data'
    else:
        train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
        model = _fit_lago_model(kit, train, K, variant, alpha, tune, alphas, folds)
        target = test if test is not None else train
        features, labels = target.features, target.labels
        evaluated_on = 'test' if test is not None else 'train'

    ranking = rank(model, features)
    frame = ranking.to_frame()
    if labels is not None:
        frame[label] = labels[ranking.order]
    kit.write(frame, 'lago_ranking.csv')

    summary = {
        'centers': model.centers.shape[0],
        'alpha': model.alpha,
        'evaluated_on': evaluated_on,
        'n_eval': features.shape[0],
    }
    if labels is not None and np.any(labels == 1):
        evaluation = evaluate_ranking(ranking.scores, labels, parse_list(cutoffs, int))
        summary['average_precision'] = evaluation.average_precision
        for k, hits in evaluation.hits_at_k.items():
            summary[f'hits_at_{k}'] = hits
    else:
        logger.warning('Evaluation rows hold no rare-class rows, skipping average precision')
    kit.summary('lago_summary', summary)


@lago.command('tune')
@click.option('--data', required=True, help='CSV file with a header row')
@click.option('--label', default='y', show_default=True, help='Name of the response column')
@click.option('--label-coding', help='Raw label to -1/+1 mapping, i.e. "spam=1,ham=-1"')
@lago_options
@click.option('--alphas', default=','.join(f'{a:g}' for a in DEFAULT_ALPHA_GRID),
              show_default=True, help='Candidate alphas')
@click.option('--folds', type=int, default=5, show_default=True, help='Number of folds')
@seed_option
@pass_kit
def lago_tune(kit, data, label, label_coding, K, variant, alphas, folds):
    """
    Cross-validated average precision per alpha
    """
    ds = kit.load(data, label, label_coding)
    tuning = tune_alpha(ds, K=K, alphas=parse_list(alphas), folds=folds,
                        seed=kit.stream_seed(Stream.Model), variant=variant)
    kit.write(tuning.to_frame(), 'lago_tuning.csv')
    kit.summary('lago_tuning_summary', {
        'best_alpha': tuning.best_alpha,
        'average_precision': tuning.average_precision[tuning.best_alpha],
        'status': tuning.status.value,
    })


@cli.group()
def boost():
    """
    AdaBoost
    """


MAX_DEPTH_HELP = 'Use weighted trees of this depth instead of stumps'


@boost.command('fit')
@data_options
@click.option('--B', 'B', type=int, default=DEFAULT_ROUNDS, show_default=True,
              help='Maximum number of rounds')
@click.option('--max-depth', type=int, help=MAX_DEPTH_HELP)
@seed_option
@pass_kit
def boost_fit(kit, data, label, label_coding, test_data, train_fraction, B, max_depth):
    """
    Boost a classifier and evaluate it
    """
    train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
    base = tree_learner(max_depth) if max_depth else None
    ensemble = adaboost(train, B=B, base=base, seed=kit.stream_seed(Stream.Model))
    kit.write(ensemble.history(), 'boost_history.csv')
    kit.save_model(ensemble, 'boost_model.npz', train.feature_names)

    target = test if test is not None else train
    decision = ensemble.decision_function(target.features)
    predictions = np.where(decision >= 0, 1, -1)
    kit.write(_evaluation_frame(target, decision, predictions, label), 'boost_predictions.csv')
    kit.summary('boost_summary', {
        'rounds': len(ensemble.rounds),
        'status': ensemble.status.value,
        'evaluated_on': 'test' if test is not None else 'train',
        'errors': misclassification(predictions, target.labels),
    })


@boost.command('grid')
@data_options
@click.option('--Bs', 'Bs', default='10,50,100,200,400', show_default=True,
              help='Round counts')
@click.option('--max-depth', type=int, help=MAX_DEPTH_HELP)
@seed_option
@pass_kit
def boost_grid_command(kit, data, label, label_coding, test_data, train_fraction, Bs,
                       max_depth):
    """
    Test errors over a range of round counts
    """
    train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
    if test is None:
        raise ConfigException('The grid needs --test or --train-fraction')
    base = tree_learner(max_depth) if max_depth else None
    grid = boosting_grid(train, test, parse_list(Bs, int), base=base,
                         seed=kit.stream_seed(Stream.Model))
    kit.write(grid, 'boost_grid.csv')
    best = grid.loc[grid['errors'].idxmin()]
    kit.summary('boost_grid_summary', {
        'cells': len(grid),
        'best_B': int(best['B']),
        'best_errors': int(best['errors']),
    })


predict_command(boost, 'boost')


@cli.group()
def forest():
    """
    Random forests and bagging
    """


@forest.command('fit')
@data_options
@click.option('--B', 'B', type=int, default=DEFAULT_TREES, show_default=True,
              help='Number of trees')
@click.option('--m', type=int, help='Features drawn per split  [default: d]')
@click.option('--bagging', 'use_bagging', is_flag=True,
              help='Consider every feature at every split')
@click.option('--bootstrap/--no-bootstrap', default=True, show_default=True,
              help='Grow every tree on a bootstrap resample')
@seed_option
@pass_kit
def forest_fit(kit, data, label, label_coding, test_data, train_fraction, B, m,
               use_bagging, bootstrap):
    """
    Grow a forest and evaluate it
    """
    train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
    seed = kit.stream_seed(Stream.Model)
    if use_bagging:
        if m is not None:
            raise ConfigException('--bagging uses every feature, drop --m')
        model = bagging(train, B=B, seed=seed)
    else:
        model = random_forest(train, B=B, m=m, seed=seed, bootstrap=bootstrap)
    kit.save_model(model, 'forest_model.npz', train.feature_names)

    target = test if test is not None else train
    decision = model.decision_function(target.features)
    predictions = model.predict(target.features)
    kit.write(_evaluation_frame(target, decision, predictions, label), 'forest_predictions.csv')
    kit.summary('forest_summary', {
        'B': model.B,
        'm': model.m,
        'bootstrap': model.bootstrap,
        'evaluated_on': 'test' if test is not None else 'train',
        'errors': misclassification(predictions, target.labels),
    })


@forest.command('grid')
@data_options
@click.option('--ms', default='1,2,3,5,7,10', show_default=True, help='Subset sizes')
@click.option('--Bs', 'Bs', default='100,200,400', show_default=True, help='Forest sizes')
@seed_option
@pass_kit
def forest_grid_command(kit, data, label, label_coding, test_data, train_fraction, ms, Bs):
    """
    Test errors over a grid of subset sizes and forest sizes
    """
    train, test = kit.datasets(data, label, label_coding, test_data, train_fraction)
    if test is None:
        raise ConfigException('The grid needs --test or --train-fraction')
    grid = forest_grid(train, test, parse_list(ms, int), parse_list(Bs, int),
                       seed=kit.stream_seed(Stream.Model))
    kit.write(grid, 'forest_grid.csv')
    best = grid.loc[grid['errors'].idxmin()]
    kit.summary('forest_grid_summary', {
        'cells': len(grid),
        'best_m': int(best['m']),
        'best_B': int(best['B']),
        'best_errors': int(best['errors']),
    })


predict_command(forest, 'forest')


@cli.command()
@click.option('--data', required=True, help='CSV file with a header row')
@click.option('--label', default='y', show_default=True, help='Name of the response column')
@click.option('--mode', type=click.Choice(SELECT_MODES), default='universes',
              show_default=True, help='Search strategy')
@criterion_options
@click.option('--B', 'B', type=int, default=DEFAULT_UNIVERSES, show_default=True,
              help='Universes or bootstrap replicates')
@click.option('--generations', type=int, default=DEFAULT_GENERATIONS, show_default=True,
              help='Generations per universe')
@click.option('--tau', type=float, default=DEFAULT_TAU, show_default=True,
              help='Vote fraction')
@click.option('--population', type=int, default=DEFAULT_POPULATION, show_default=True,
              help='Population size')
@click.option('--truth', help='1-based true variables, flags group I/II in exhaustive mode')
@seed_option
@pass_kit
def select(kit, data, label, mode, criterion, gamma, B, generations, tau, population, truth):
    """
    Variable subset selection for linear regression
    """
    ds = kit.load(data, label, regression=True)
    spec = CriterionSpec.for_kind(criterion, ds.n, gamma)
    seed = kit.stream_seed(Stream.Model)
    names = ds.feature_names
    summary = {'mode': mode, 'criterion': spec.kind.value, 'gamma': spec.gamma}

    if mode == 'exhaustive':
        result = exhaustive_search(ds, spec)
        table = result.table
        if truth:
            truth_mask = SubsetMask.from_indices([t - 1 for t in parse_list(truth, int)], ds.d)
            table, gap = group_gap(result, truth_mask)
            summary['group_gap'] = gap
        kit.write(table, 'select_table.csv')
        selected, score = result.best, result.best_score
    elif mode == 'evolve':
        universe = evolve(ds, spec, ga=GAParams(population=population),
                          generations=generations, seed=seed)
        kit.write(pd.DataFrame({
            'generation': np.arange(len(universe.history)),
            'best_score': universe.history,
        }), 'select_history.csv')
        selected, score = universe.best_mask, universe.best_score
    elif mode == 'stepwise':
        selected, score = stepwise(ds, spec)
    elif mode == 'universes':
        votes, universes = parallel_universes(
            ds, spec, B=B, generations=generations, tau=tau, seed=seed,
            ga=GAParams(population=population),
        )
        kit.write(votes.to_frame(), 'select_frequencies.csv')
        kit.write(pd.DataFrame({
            'universe': np.arange(1, len(universes) + 1),
            'seed': [str(u.universe_seed) for u in universes],
            'variables': [u.best_mask.label(names) for u in universes],
            'score': [u.best_score for u in universes],
        }), 'select_universes.csv')
        selected, score = votes.selected, None
    else:
        votes = bagged_stepwise(ds, spec, B=B, seed=seed, tau=tau)
        kit.write(votes.to_frame(), 'select_frequencies.csv')
        selected, score = votes.selected, None

    summary['selected'] = selected.label(names)
    summary['size'] = selected.size
    if score is not None:
        summary['score'] = score
    kit.summary('select_summary', summary)


class ExperimentGroup(click.Group):
    """
    Subcommands built from the experiment plugins.
    """

    def list_commands(self, ctx):
        return sorted(set(super().list_commands(ctx)) | set(load_experiments()))

    def get_command(self, ctx, name):
        command = super().get_command(ctx, name)
        if command is not None:
            return command
        experiment = load_experiments().get(name)
        if experiment is None:
            return None

        @pass_kit
        def callback(kit, **kwargs):
            experiment(kit).run(**kwargs)

        params = list(experiment.params)
        if not any(param.name == 'seed' for param in params):
            params.append(click.Option(['--seed'], type=int, help=SEED_HELP))
        return click.Command(name, params=params, callback=callback,
                             help=experiment.help, short_help=experiment.help)


@cli.command(cls=ExperimentGroup)
def experiments():
    """
    Reproduce the reference studies as CSV tables
    """


def replay_arguments(ctx: click.Context, run_config: RunConfig,
                     overrides: Optional[Dict[str, Any]] = None) -> List[str]:
    """
    Command line equivalent to a manifest.

    Args:
        ctx: Context of the root command
        run_config: Manifest contents
        overrides: Run settings replacing the recorded ones, i.e. out_dir

    Returns:
        Arguments for the root command

    """
    params = dict(run_config.params)
    argv = []
    for key in GLOBAL_KEYS:
        value = params.pop(key, None)
        if overrides and overrides.get(key) is not None:
            value = overrides[key]
        if value is not None:
            argv += [f'--{key.replace("_", "-")}', str(value)]

    command = ctx.command
    for name in run_config.command:
        sub_command = None
        if isinstance(command, click.Group):
            sub_command = command.get_command(ctx, name)
        if sub_command is None:
            raise ConfigException(
                f'Manifest names unknown command {" ".join(run_config.command)!r}'
            )
        argv.append(name)
        command = sub_command

    by_name = {param.name: param for param in command.params}
    unknown = sorted(set(params) - set(by_name))
    if unknown:
        raise ConfigException(f'Manifest holds unknown parameters: {unknown}')
    for name, value in params.items():
        param = by_name[name]
        if value is None:
            continue
        if isinstance(param, click.Argument):
            argv.append(str(value))
        elif param.is_flag:
            if value:
                argv.append(param.opts[0])
            elif param.secondary_opts:
                argv.append(param.secondary_opts[0])
        else:
            argv += [param.opts[0], str(value)]
    return argv


@cli.command()
@click.argument('manifest')
@click.pass_context
def replay(ctx, manifest):
    """
    Re-run a command from its manifest. Only --out-dir and --workers given
    to this invocation replace the recorded values.
    """
    root = ctx.find_root()
    run_config = RunConfig.from_file(manifest)
    overrides = {key: root.params.get(key) for key in ('out_dir', 'workers')}
    argv = replay_arguments(root, run_config, overrides)
    logger.info(message('Replay', f'{PROG_NAME} {" ".join(argv)}'))
    cli.main(args=argv, prog_name=PROG_NAME, standalone_mode=False)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs the command line interface.

    Args:
        argv: Arguments, sys.argv[1:] by default

    Returns:
        Exit code. 0 on success, 2 on usage errors, the exception's exit code
        for library errors

    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        with click.Context(cli, info_name=PROG_NAME) as ctx:
            click.echo(cli.get_help(ctx), err=True)
        return 2
    try:
        result = cli.main(args=argv, prog_name=PROG_NAME, standalone_mode=False,
                          auto_envvar_prefix=ENV_PREFIX)
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.Abort:
        click.echo('Aborted!', err=True)
        return 1
    except RarekitException as error:
        logger.error(message(type(error).__name__, str(error)))
        return error.exit_code
    return result if isinstance(result, int) else 0


def main():
    sys.exit(run())
