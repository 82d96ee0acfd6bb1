"""Seed handling: one user seed, many independent reproducible streams."""

from __future__ import annotations

import numpy as np

_MOD = 1 << 64


def derive_rng(seed: int, *lane) -> np.random.Generator:
    """A counter-based stream for (seed, lane).

    Philox is splittable by construction: every lane gets its own 2^128
    block of the counter space, so shots and suites never share draws and
    any lane can be regenerated independently.
    """
    counter = 0
    for v in lane:
        counter = (counter * 1_000_003 + int(v) + 1) % _MOD
    bg = np.random.Philox(key=int(seed) % _MOD, counter=counter << 128)
    return np.random.Generator(bg)
