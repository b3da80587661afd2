#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os

from enum import Enum


class KernelKind(Enum):
    """
    Enum with supported kernel functions.
    """
    Linear = 'linear'
    Gaussian = 'gaussian_h'


class LagoVariant(Enum):
    """
    Enum with LAGO radius structures: spherical or elliptical.
    """
    Spherical = 'slago'
    Elliptical = 'elago'


class CriterionKind(Enum):
    """
    Enum with model selection criteria.
    """
    AIC = 'aic'
    BIC = 'bic'
    Custom = 'custom'


class CanonicalStatus(Enum):
    """
    Enum with the outcomes of checking a hyperplane against a dataset.
    """
    Canonical = 'canonical'
    SeparatingNotCanonical = 'separating_not_canonical'
    NotSeparating = 'not_separating'


class FitStatus(Enum):
    """
    Enum with fit outcomes. Anything but Ok has also been logged as a warning.
    """
    Ok = 'ok'
    RankDeficient = 'rank_deficient'
    EarlyStop = 'early_stop'
    FoldsSkipped = 'folds_skipped'


class ExecutorKind(Enum):
    """
    Enum with executor types for the job exchange.
    """
    Process = 'process'
    Thread = 'thread'


class Stream(Enum):
    """
    Enum with the independent random streams of one run. Each is seeded with
    SeedTree(master seed, (stream,)).
    """
    Split = 1
    Model = 2
    Data = 3


DEFAULT_PROJECT_DIR = os.getcwd()
DATA_DIR_ENV = 'RAREKIT_DATA_DIR'
EXPERIMENT_PATH_ENV = 'RAREKIT_EXPERIMENT_PATH'
ENV_PREFIX = 'RAREKIT'

DEFAULT_SEED = 1
DEFAULT_WORKERS = 1

# Seed mixing (SplitMix64 finalizer)
MASK64 = 0xFFFFFFFFFFFFFFFF
MASK32 = 0xFFFFFFFF
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
SPLITMIX_MUL2 = 0x94D049BB133111EB

DEFAULT_LABEL_CODING = {0.0: -1, 1.0: 1, -1.0: -1}

# Kernels
DEFAULT_BANDWIDTH = 1.0
KPCA_RELATIVE_TOL = 1e-10

# Hinge classifier
DEFAULT_GAMMA = 1.0
DEFAULT_EPOCHS = 10

# LAGO
DEFAULT_NEIGHBOURS = 5
DEFAULT_ALPHA = 1.0
DEFAULT_ALPHA_GRID = (0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0)
RADIUS_FLOOR_FACTOR = 1e-9

# Ensembles
DEFAULT_ROUNDS = 50
DEFAULT_TREES = 200

# Variable selection
EXHAUSTIVE_MAX_VARIABLES = 20
RSS_FLOOR_FACTOR = 1e-12
DEFAULT_GENERATIONS = 6
DEFAULT_UNIVERSES = 10
DEFAULT_TAU = 0.5
DEFAULT_POPULATION = 50
DEFAULT_CROSSOVER_RATE = 0.5

# Output
FLOAT_FORMAT = '%.17g'
MANIFEST_NAME = 'manifest.yaml'

APP = 'Rarekit'
APP_DATA_TOKEN = 'rarekit'
