"""Seeded, splittable random streams.

Every randomized operation derives its generator from a master seed plus a
purpose tag, so unrelated consumers never share draws. Cascade simulation
additionally addresses a Philox counter per trace: trace ``k`` owns the
uniform block starting at counter ``k * stride / 4``. Drawing traces in
bulk or one at a time (or in parallel chunks) yields identical numbers.
"""
from __future__ import annotations

import numpy as np

# Philox emits four 64-bit words per counter increment; one double per word.
_WORDS_PER_COUNTER = 4

PURPOSES = {
    "graph": 1,
    "cascade": 2,
    "firstedge_plus": 3,
    "guess": 4,
    "sweep": 5,
    "fuzz": 6,
}


def _key(seed: int, purpose: str) -> np.ndarray:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    tag = PURPOSES[purpose]
    return np.random.SeedSequence([int(seed), tag]).generate_state(2, np.uint64)


def generator(seed: int, purpose: str, *extra: int) -> np.random.Generator:
    """Independent generator for ``(seed, purpose, *extra)``."""
    if extra:
        ss = np.random.SeedSequence([int(seed), PURPOSES[purpose], *map(int, extra)])
        return np.random.Generator(np.random.Philox(key=ss.generate_state(2, np.uint64)))
    return np.random.Generator(np.random.Philox(key=_key(seed, purpose)))


def padded_stride(width: int) -> int:
    """Round a per-trace draw count up to a whole number of Philox blocks."""
    return -(-width // _WORDS_PER_COUNTER) * _WORDS_PER_COUNTER


def trace_uniforms(seed: int, start: int, count: int, width: int) -> np.ndarray:
    """Uniforms in [0, 1) for traces ``start .. start+count-1``.

    Returns an array of shape ``(count, width)``. Row ``j`` depends only on
    ``(seed, start + j, width)``.
    """
    stride = padded_stride(width)
    bitgen = np.random.Philox(
        counter=[start * stride // _WORDS_PER_COUNTER, 0, 0, 0],
        key=_key(seed, "cascade"),
    )
    block = np.random.Generator(bitgen).random(count * stride)
    return block.reshape(count, stride)[:, :width]
