#!/usr/bin/env python3
# -*- coding: utf-8 -*-


class RarekitException(Exception):

    exit_code = 1


class DataException(RarekitException):

    exit_code = 3


class MissingDatasetException(DataException):

    def __init__(self, *args, **kwargs):
        if len(args) == 1:
            path = args[0]
            args = [(
                f'\n'
                f'The dataset {path!r} could not be found.\n'
                f'\n'
                f'Relative paths are looked up in the working directory and '
                f'then in the directory named by the RAREKIT_DATA_DIR '
                f'environment variable:\n'
                f'\n'
                f'  export RAREKIT_DATA_DIR=/path/to/datasets\n'
                f'\n'
                f'To point a command at a file directly, use the "--data" '
                f'option:\n'
                f'\n'
                f'  rarekit lago --data /path/to/data.csv\n'
            )]
        super().__init__(*args, **kwargs)


class DimensionMismatchException(RarekitException, ValueError):

    exit_code = 4


class ContractException(RarekitException, ValueError):

    exit_code = 4


class BaseLearnerException(RarekitException):

    exit_code = 5


class FoldException(RarekitException):

    exit_code = 5

    def __init__(self, fold: int, error: BaseException):
        self.fold = fold
        self.error = error
        super().__init__(f'Fold {fold} failed: {error}')


class FoldSkipped(RarekitException):
    """
    Raised by trainers or evaluators to skip a fold. The fold is reported and
    left out of the mean.
    """


class ConfigException(RarekitException):

    exit_code = 2
