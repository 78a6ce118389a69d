"""Counter-based substreams for reproducible parallel sampling.

Every random quantity is drawn from a Philox generator keyed by
(master_seed, sample_index) with the stream tag folded into the counter
block.  Streams are therefore independent of worker count and
scheduling order, and any single sample can be regenerated in
isolation.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _tag_id(tag: str) -> int:
    return int.from_bytes(hashlib.blake2s(tag.encode(), digest_size=8).digest(), "little")


def stream(master_seed: int, sample_index: int = 0, tag: str = "") -> np.random.Generator:
    """Generator for one (seed, sample, tag) substream."""
    key = np.array([master_seed & _MASK64, sample_index & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, 0, _tag_id(tag)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))
