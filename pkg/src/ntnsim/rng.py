"""Counter-based random streams for reproducible, order-independent trials.

Every trial's randomness is a pure function of (global seed, stream label,
trial index), backed by the Philox counter-based generator.  Results are
therefore bit-identical no matter how trials are chunked across workers.
"""

from __future__ import annotations

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def stream_id(label: str) -> int:
    """Stable 32-bit identifier for a named random stream."""
    return zlib.crc32(label.encode("utf-8"))


def philox_key(seed: int, label: str, index: int) -> list[int]:
    """128-bit Philox key derived from (seed, stream label, trial index)."""
    k0 = _splitmix64(seed & _MASK64)
    k0 = _splitmix64(k0 ^ _splitmix64(stream_id(label)))
    k0 = _splitmix64(k0 ^ _splitmix64(index & _MASK64))
    return [k0, _splitmix64(k0)]


def trial_rng(seed: int, label: str, index: int = 0) -> np.random.Generator:
    """Generator for one trial of one stream; pure in all three arguments."""
    return np.random.Generator(np.random.Philox(key=philox_key(seed, label, index)))
