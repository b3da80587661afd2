#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from rarekit.exceptions import (
    BaseLearnerException,
    ConfigException,
    ContractException,
    DataException,
    DimensionMismatchException,
    FoldException,
    FoldSkipped,
    MissingDatasetException,
    RarekitException,
)


__version__ = '0.1.0'
