"""Deterministic random-number plumbing.

Monte Carlo experiments key every trial's generator off
``(master_seed, trial_index)`` so results do not depend on how trials
are batched across threads.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

SeedLike = Union[None, int, np.random.Generator]


def ensure_rng(seed: SeedLike = None) -> np.random.Generator:
    """Return a Generator: pass one through, seed a new one, or draw fresh entropy."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_rng(master: int, *path: int) -> np.random.Generator:
    """Generator keyed by (master, *path), independent of call order elsewhere."""
    entropy = (int(master),) + tuple(int(p) for p in path)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def fresh_master(seed: Optional[int] = None) -> int:
    """Normalize a master seed, drawing one from OS entropy when absent."""
    if seed is not None:
        return int(seed)
    entropy = np.random.SeedSequence().entropy
    assert entropy is not None
    return int(entropy)
