# randpca/core/rng.py

from typing import Union

import numpy as np

Seed = Union[int, np.random.SeedSequence, np.random.Generator, None]


def make_rng(seed: Seed) -> np.random.Generator:
    """
    Returns a PCG64 generator for `seed`. Identical integer seeds give
    identical streams; passing a Generator returns it unchanged.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_seed(seed: int, index: int) -> int:
    """
    Derives an independent 64-bit integer seed from `seed`, so one user
    seed can drive several unrelated random streams reproducibly.
    """
    child = np.random.SeedSequence(seed).spawn(index + 1)[index]
    return int(child.generate_state(1, dtype=np.uint64)[0])
