"""Fan a master seed out to per-point generators.

Point ``i`` of an ensemble with master seed ``s`` draws from
``numpy.random.default_rng(SeedSequence([s, i]))``.  This is the only
source of randomness in the package.
"""

from __future__ import annotations

import numpy as np


def point_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(index)]))
