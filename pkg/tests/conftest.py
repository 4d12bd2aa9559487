"""Shared helpers for the test suite."""

import numpy as np

from spernerlab._bitops import strict_supermask_array, submask_array
from spernerlab.lattice import VertexSet


def random_maximal_antichain(n: int, rng: np.random.Generator) -> VertexSet:
    """Greedy maximal antichain over a uniformly shuffled vertex order."""
    blocked = np.zeros(1 << n, dtype=bool)
    chosen = []
    for v in rng.permutation(1 << n):
        v = int(v)
        if blocked[v]:
            continue
        chosen.append(v)
        blocked[submask_array(v)] = True
        blocked[strict_supermask_array(v, n)] = True
    return VertexSet.from_ids(n, chosen)
