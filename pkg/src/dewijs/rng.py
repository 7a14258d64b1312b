"""Randomness contract: named, seedable, splittable streams.

All Monte Carlo entry points draw from numpy SFC64 bit generators.  Stream
``i`` for a run seeded with ``seed`` is ``SFC64(SeedSequence([seed, i]))``,
the standard derivation for independent parallel streams, so results are
bit-reproducible for a fixed (seed, worker count) and workers never share
state.  The compiled and pure-Python sampling backends consume these streams
identically (verified by tests), so outputs do not depend on which backend
is active.
"""

import numpy as np
from numpy.random import SFC64, SeedSequence

_SEED_MASK = (1 << 64) - 1


def worker_bit_generators(seed, n_streams):
    """Independent SFC64 streams derived from (seed, stream index)."""
    seed = int(seed) & _SEED_MASK
    return [SFC64(SeedSequence([seed, i])) for i in range(int(n_streams))]


def allocate(n, workers):
    """Split n samples into per-worker contiguous block sizes."""
    n = int(n)
    workers = max(1, int(workers))
    base, extra = divmod(n, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def generator_for(bit_generator):
    return np.random.Generator(bit_generator)
