#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from abc import ABC, abstractmethod
from typing import List

import click

from rarekit.controller import Rarekit


class BaseExperiment(ABC):
    """
    Base experiment. Reproduces one study as CSV tables on run().
    """

    name = NotImplemented
    help = ''

    # Click options exposed on the experiment's subcommand
    params: List[click.Parameter] = []

    def __init__(self, kit: Rarekit):
        """
        Entry point for BaseExperiment.
        """
        self._kit = kit

    @property
    def kit(self) -> Rarekit:
        """
        Controller the experiment writes its tables through.
        """
        return self._kit

    @abstractmethod
    def run(self, **kwargs):
        """
        Method to run the experiment. Receives the resolved click params.
        """
        ...
