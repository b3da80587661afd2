#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Stateless seed derivation.

A child seed is a pure function of a 64-bit master seed and a path of 32-bit
labels (universe index, tree index, fold index, ...):

    fold  = mix(len(path))
    fold  = mix(fold ^ label)        for each label in path
    child = mix(master ^ fold)

where mix is the SplitMix64 finalizer

    z = (z + 0x9E3779B97F4A7C15) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    z =  z ^ (z >> 31)

The empty path maps to the master seed itself. All arithmetic is on Python
integers, so results are identical on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rarekit.constants import (
    MASK32,
    MASK64,
    SPLITMIX_GAMMA,
    SPLITMIX_MUL1,
    SPLITMIX_MUL2,
)
from rarekit.exceptions import ContractException


def splitmix64(value: int) -> int:
    """
    SplitMix64 finalizer. A bijection on 64-bit integers.

    Args:
        value: 64-bit unsigned integer

    Returns:
        Mixed 64-bit unsigned integer

    """
    z = (value + SPLITMIX_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * SPLITMIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_MUL2) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeedTree:
    """
    Address of a random stream: master seed plus a path of 32-bit labels.
    """
    master: int
    path: Tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.master) <= MASK64:
            raise ContractException(f'Master seed {self.master} is not a 64-bit unsigned integer')
        path = tuple(int(p) for p in self.path)
        for label in path:
            if not 0 <= label <= MASK32:
                raise ContractException(f'Path label {label} is not a 32-bit unsigned integer')
        object.__setattr__(self, 'master', int(self.master))
        object.__setattr__(self, 'path', path)

    def child(self, *labels: int) -> SeedTree:
        """
        Seed tree one or more levels further down.
        """
        return SeedTree(self.master, self.path + tuple(labels))

    @property
    def seed(self) -> int:
        return derive_seed(self)

    def rng(self) -> np.random.Generator:
        """
        Numpy generator seeded with the derived seed.
        """
        return np.random.default_rng(self.seed)


def derive_seed(tree: SeedTree) -> int:
    """
    Derive the 64-bit seed for the given seed tree.

    Args:
        tree: Seed tree

    Returns:
        64-bit unsigned integer

    """
    if not tree.path:
        return tree.master
    fold = splitmix64(len(tree.path))
    for label in tree.path:
        fold = splitmix64(fold ^ label)
    return splitmix64(tree.master ^ fold)
