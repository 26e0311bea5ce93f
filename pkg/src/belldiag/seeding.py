"""Deterministic 64-bit seed derivation and generator construction.

Every stochastic API in this package takes an explicit seed; derived seeds
(per sweep row, per tomography setting) come from the splitmix64 mix below,
so parallel and serial execution see identical streams on every platform.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def _splitmix64(state: int) -> int:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *indices: int) -> int:
    """Mix a base seed with one or more indices into a fresh 64-bit seed."""
    state = seed & _MASK
    for idx in indices:
        state = _splitmix64(state ^ ((idx + 1) & _MASK))
    return _splitmix64(state)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator with no global state."""
    return np.random.Generator(np.random.PCG64(seed & _MASK))
