#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
import os
import sys

from logging import StreamHandler
from logging.handlers import RotatingFileHandler

from rarekit.constants import APP


class KitLogger:

    _logger = None
    _file_handler = None

    @classmethod
    def setup(cls):
        cls._logger = logging.getLogger(APP)
        stream_handler = StreamHandler(sys.stdout)
        stream_handler.setLevel(logging.INFO)
        cls._logger.addHandler(stream_handler)
        cls._logger.setLevel(logging.INFO)
        cls.attach_file_handler()

    @classmethod
    def attach_file_handler(cls):
        """
        Writes warnings and errors to the log file of the loaded config. Safe
        to call repeatedly; the handler follows the latest config.
        """
        from rarekit import config
        if not config.Config or cls._logger is None:
            return
        if cls._file_handler is not None:
            if cls._file_handler.baseFilename == os.path.abspath(config.Config.logs):
                return
            cls._logger.removeHandler(cls._file_handler)
            cls._file_handler.close()
        if not os.path.exists(config.Config.log_dir):
            os.makedirs(config.Config.log_dir)
        file_handler = RotatingFileHandler(
            config.Config.logs,
            maxBytes=1024**2 * 10,
            backupCount=5
        )
        formatter = logging.Formatter(
            '%(asctime)s: [%(levelname)s] %(message)s'
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(logging.WARNING)
        cls._logger.addHandler(file_handler)
        cls._file_handler = file_handler

    def __new__(cls, *args, **kwargs):
        if not cls._logger:
            cls.setup()
        return cls._logger
