#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os

from typing import Callable, List, Optional

import pandas as pd

from rarekit.constants import FLOAT_FORMAT
from rarekit.exceptions import ConfigException


def write_table(frame: pd.DataFrame, filename: str) -> str:
    """
    Writes a table as CSV with a header row and full float precision. Output
    is byte-identical for identical frames.

    Args:
        frame (pd.DataFrame): Table to write
        filename (str): Path to CSV file

    Returns:
        str: Path written to

    """
    filename = os.path.expanduser(filename)
    dirname = os.path.dirname(filename)
    if dirname and not os.path.isdir(dirname):
        os.makedirs(dirname)
    frame.to_csv(filename, index=False, float_format=FLOAT_FORMAT)
    return filename


def message(title='Info', body='', width=80):
    """
    Formats a framed message based on input.

    Args:
        title (str): Title of the message
        body (str): Message body
        width (int): Message line width

    Returns:
        str: Framed message

    """
    header = ' {} '.format(title).center(width, '=')
    footer = '=' * width
    return '\n{}\n{}\n{}'.format(header, body, footer)


def parse_list(text: Optional[str], cast: Callable = float) -> List:
    """
    Parses a comma separated list such as "1,5,10".

    Args:
        text (str): Comma separated values
        cast (callable): Type to cast each value to

    Returns:
        list: Parsed values

    """
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [cast(t) for t in text]
    values = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(cast(item))
        except ValueError:
            raise ConfigException(f'Invalid list value {item!r} in {text!r}')
    return values
