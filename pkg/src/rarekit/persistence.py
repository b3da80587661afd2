#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fitted models as numpy .npz archives.

Arrays are stored under their own names and everything scalar goes into a
YAML document under "meta". Archives are read with allow_pickle=False, so
loading a model file never executes code.
"""

import os

from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from rarekit import __version__
from rarekit.constants import FitStatus, KernelKind, LagoVariant
from rarekit.data import resolve_data_path
from rarekit.ensembles.boosting import BoostEnsemble, BoostRound
from rarekit.ensembles.forest import Forest
from rarekit.ensembles.trees import DecisionTree
from rarekit.exceptions import DataException, MissingDatasetException
from rarekit.kernels.core import KernelSpec
from rarekit.kernels.lago import LagoModel
from rarekit.kernels.svm import KernelClassifier
from rarekit.logger import KitLogger

logger = KitLogger()

MODEL_FORMAT = 1

Model = Union[KernelClassifier, BoostEnsemble, Forest, LagoModel]

MODEL_KINDS = {
    KernelClassifier: 'svm',
    BoostEnsemble: 'boost',
    Forest: 'forest',
    LagoModel: 'lago',
}

ROUND_FIELDS = ('round', 'error', 'ratio', 'vote', 'reweighted_error',
                'exp_loss', 'train_errors', 'capped')


def model_kind(model: Model) -> str:
    kind = MODEL_KINDS.get(type(model))
    if kind is None:
        raise DataException(f'Cannot save a {type(model).__name__}')
    return kind


def _pack_trees(trees: Sequence[DecisionTree]) -> Dict[str, np.ndarray]:
    """
    Node arrays of all trees laid end to end. Child indices stay local to
    their tree.
    """
    return {
        'tree_nodes': np.array([t.node_count for t in trees], dtype=np.int64),
        'tree_depth_limit': np.array(
            [-1 if t.max_depth is None else t.max_depth for t in trees], dtype=np.int64
        ),
        'node_feature': np.concatenate([t.feature for t in trees]),
        'node_threshold': np.concatenate([t.threshold for t in trees]),
        'node_left': np.concatenate([t.left for t in trees]),
        'node_right': np.concatenate([t.right for t in trees]),
        'node_label': np.concatenate([t.label for t in trees]),
    }


def _unpack_trees(arrays, n_features: int) -> Tuple[DecisionTree, ...]:
    trees = []
    start = 0
    for count, limit in zip(arrays['tree_nodes'], arrays['tree_depth_limit']):
        end = start + int(count)
        parts = {}
        for name in ('feature', 'threshold', 'left', 'right', 'label'):
            values = np.array(arrays[f'node_{name}'][start:end])
            values.setflags(write=False)
            parts[name] = values
        trees.append(DecisionTree(
            n_features=n_features,
            max_depth=None if limit < 0 else int(limit),
            **parts,
        ))
        start = end
    return tuple(trees)


def _encode(model: Model) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    kind = model_kind(model)
    if kind == 'svm':
        meta = {
            'kernel': model.spec.kind.value,
            'h': float(model.spec.h),
            'beta0': float(model.beta0),
            'lam': float(model.lam),
            'best_epoch': int(model.best_epoch),
        }
        arrays = {
            'coefficients': model.coefficients,
            'training_features': model.training_features,
            'training_labels': model.training_labels,
            'objective_history': np.asarray(model.objective_history),
        }
    elif kind == 'boost':
        meta = {
            'B': int(model.B),
            'status': model.status.value,
            'n_features': int(model.members[0].n_features),
        }
        arrays = _pack_trees(model.members)
        arrays['votes'] = np.asarray(model.votes)
        for name in ROUND_FIELDS:
            arrays[f'round_{name}'] = np.array([getattr(r, name) for r in model.rounds])
    elif kind == 'forest':
        meta = {
            'm': int(model.m),
            'B': int(model.B),
            'seed': int(model.seed),
            'bootstrap': bool(model.bootstrap),
            'n_features': int(model.members[0].n_features),
        }
        arrays = _pack_trees(model.members)
        arrays['tree_seeds'] = np.array(model.tree_seeds, dtype=np.uint64).reshape(-1, 2)
    else:
        meta = {
            'alpha': float(model.alpha),
            'K': int(model.K),
            'variant': model.variant.value,
            'r_floor': float(model.r_floor),
        }
        arrays = {'centers': model.centers, 'radii': model.radii}
    return meta, arrays


def _decode(kind: str, meta: Dict[str, Any], arrays) -> Model:
    if kind == 'svm':
        return KernelClassifier(
            coefficients=np.array(arrays['coefficients']),
            beta0=float(meta['beta0']),
            spec=KernelSpec(KernelKind(meta['kernel']), meta['h']),
            training_features=np.array(arrays['training_features']),
            training_labels=np.array(arrays['training_labels']),
            lam=float(meta['lam']),
            objective_history=tuple(float(v) for v in arrays['objective_history']),
            best_epoch=int(meta['best_epoch']),
        )
    if kind == 'boost':
        columns = [arrays[f'round_{name}'] for name in ROUND_FIELDS]
        rounds = tuple(
            BoostRound(int(r), float(e), float(ratio), float(v), float(re), float(loss),
                       int(errors), bool(capped))
            for r, e, ratio, v, re, loss, errors, capped in zip(*columns)
        )
        return BoostEnsemble(
            members=_unpack_trees(arrays, int(meta['n_features'])),
            votes=tuple(float(v) for v in arrays['votes']),
            rounds=rounds,
            B=int(meta['B']),
            status=FitStatus(meta['status']),
        )
    if kind == 'forest':
        return Forest(
            members=_unpack_trees(arrays, int(meta['n_features'])),
            m=int(meta['m']),
            B=int(meta['B']),
            seed=int(meta['seed']),
            tree_seeds=tuple((int(a), int(b)) for a, b in arrays['tree_seeds']),
            bootstrap=bool(meta['bootstrap']),
        )
    radii = np.array(arrays['radii'])
    radii.setflags(write=False)
    return LagoModel(
        centers=np.array(arrays['centers']),
        radii=radii,
        alpha=float(meta['alpha']),
        K=int(meta['K']),
        variant=LagoVariant(meta['variant']),
        r_floor=float(meta['r_floor']),
    )


def save_model(model: Model, path: str,
               feature_names: Optional[Sequence[str]] = None) -> str:
    """
    Write a fitted model to an .npz archive.

    Args:
        model: Kernel classifier, boosted ensemble, forest or LAGO model
        path: Target file, should end in .npz
        feature_names: Names of the training columns, checked when the model
                       is applied to new data

    Returns:
        Path written to

    """
    meta, arrays = _encode(model)
    meta.update({
        'format': MODEL_FORMAT,
        'kind': model_kind(model),
        'rarekit': __version__,
        'feature_names': list(feature_names) if feature_names else None,
    })
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'wb') as stream:
        np.savez(stream, meta=np.array(yaml.safe_dump(meta)), **arrays)
    return path


def load_model(path: str, kind: Optional[str] = None
               ) -> Tuple[Model, Optional[Tuple[str, ...]]]:
    """
    Read a model written by save_model().

    Args:
        path: Model file, relative paths also looked up in the data dir
        kind: Expected model kind, i.e. "forest". Any kind if None

    Returns:
        Model and the training feature names, if recorded

    Raises:
        MissingDatasetException: If the file does not exist
        DataException: If the file is not a model archive or holds another
                       kind of model

    """
    try:
        path = resolve_data_path(path)
    except MissingDatasetException:
        raise DataException(f'Model file {path!r} does not exist')
    try:
        with np.load(path, allow_pickle=False) as archive:
            arrays = {name: archive[name] for name in archive.files}
    except (OSError, ValueError) as error:
        raise DataException(f'{path!r} is not a model archive ({error})')
    if 'meta' not in arrays:
        raise DataException(f'{path!r} has no model metadata')
    meta = yaml.safe_load(str(arrays.pop('meta')))
    if not isinstance(meta, dict) or meta.get('format') != MODEL_FORMAT:
        raise DataException(f'{path!r} is not a format {MODEL_FORMAT} model archive')
    stored = meta.get('kind')
    if stored not in MODEL_KINDS.values():
        raise DataException(f'{path!r} holds an unknown model kind {stored!r}')
    if kind is not None and stored != kind:
        raise DataException(f'{path!r} holds a {stored} model, expected {kind}')
    try:
        model = _decode(stored, meta, arrays)
    except KeyError as error:
        raise DataException(f'{path!r} is missing model field {error}')
    names = meta.get('feature_names')
    logger.info(f'Loaded {stored} model from {path}')
    return model, tuple(names) if names else None
