"""Seed derivation for reproducible parallel work.

Stream-splitting rule: a master seed feeds ``numpy.random.SeedSequence``;
child sequences are spawned in a fixed order (child 0 for model training,
children 1..n for the per-term estimations, in term order) and collapsed
to 64-bit integers. Children are statistically independent regardless of
the master seed, and the mapping is stable across runs and platforms, so
term estimations may execute in any order or in parallel without changing
results.
"""

import numpy as np


def spawn_seeds(master_seed, count):
    """``count`` independent integer seeds derived from ``master_seed``."""
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]
