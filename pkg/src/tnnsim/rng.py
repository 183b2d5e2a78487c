"""Named, splittable PRNG streams.

Every random draw in the simulator comes from ``stream(seed, purpose, *key)``,
so results never depend on evaluation order, only on the key.
"""

from __future__ import annotations

import numpy as np

INIT = 1
BRV = 2
DATA = 3
SHUFFLE = 4


def stream(seed: int, purpose: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(purpose, *map(int, key)))
    return np.random.Generator(np.random.Philox(ss))
