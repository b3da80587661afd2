#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import importlib
import importlib.util
import inspect
import os
import sys

from pathlib import Path
from typing import Dict, Type

from rarekit.constants import EXPERIMENT_PATH_ENV
from rarekit.experiments.base_experiment import BaseExperiment


def load_experiments() -> Dict[str, Type[BaseExperiment]]:
    """
    Dictionary of experiments by name
    """
    experiments = {}
    modules = []

    # Included experiments
    this_dir = Path(inspect.getfile(inspect.currentframe())).parent
    for filename in sorted(this_dir.iterdir()):
        if filename.suffix == '.py' and filename.stem.endswith('_experiment'):
            modules.append(importlib.import_module(f'{__name__}.{filename.stem}'))

    # Third party experiments
    plugin_dir = os.getenv(EXPERIMENT_PATH_ENV)
    if plugin_dir and Path(plugin_dir).exists():
        for filename in sorted(Path(plugin_dir).iterdir()):
            if filename.suffix != '.py' or not filename.stem.endswith('_experiment'):
                continue
            module_name = filename.stem
            spec = importlib.util.spec_from_file_location(module_name, str(filename))
            module = importlib.util.module_from_spec(spec)
            sys.modules[module_name] = module
            spec.loader.exec_module(module)
            modules.append(module)

    # Collect experiment classes
    for module in modules:
        for name, cls in inspect.getmembers(module, inspect.isclass):
            if cls == BaseExperiment:
                continue
            elif issubclass(cls, BaseExperiment) and not inspect.isabstract(cls):
                experiments[cls.name] = cls

    return experiments
