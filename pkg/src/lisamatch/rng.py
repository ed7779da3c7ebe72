"""Seeded random streams.

Every generator is numpy's Philox4x64 counter-based bit generator with a
128-bit key: the low 64 bits hold the user seed, the high 64 bits the stream
id. Point generation, permutation sampling and noise each draw from their own
stream, so changing one consumer never shifts another's numbers.
"""

from __future__ import annotations

import hashlib

import numpy as np

POINTS = 1
PERMUTATION = 2
NOISE = 3

_MASK64 = (1 << 64) - 1


def stream(seed: int, stream_id: int) -> np.random.Generator:
    key = (int(seed) & _MASK64) | ((int(stream_id) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def hash64(*parts) -> int:
    """BLAKE2b-64 of the ``|``-joined ``repr`` of each part, little-endian."""
    text = "|".join(repr(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "little")
