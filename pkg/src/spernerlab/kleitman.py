"""Kleitman's edge-minimality theorem as a checkable oracle, plus the
density lower bound it yields for large vertex sets.

Kleitman's theorem says initial segments of the centrality order minimize
the number of comparable pairs among all vertex sets of the same size.  At
tiny n we can verify that exhaustively (every subset of P(n) for n <= 4);
above that we settle for randomized falsification.  The density bound is
the workhorse consequence: any U with |U| >= (t + eps)m spans strictly
more than eps * n^t * |U| / (2t)^(t+1) comparable pairs, because U must
reach outside the t middle layers and every outside vertex is comparable
to many middle-layer vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._bitops import popcount, zeta_transform_batch
from .errors import FeasibilityError, PreconditionError
from .lattice import comparable, induced_edges, initial_segment

_EXHAUSTIVE_N_CAP = 4
_RANDOMIZED_N_CAP = 10


@dataclass(frozen=True)
class DensityBoundParams:
    """Inputs of the density lower bound."""

    t: int
    eps: float
    n: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError(f"t must be a positive integer, got {self.t}")
        if not 0 < self.eps <= 0.5:
            raise ValueError(f"eps must lie in (0, 1/2], got {self.eps}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")

    @property
    def middle_layer_size(self) -> int:
        return math.comb(self.n, self.n // 2)

    @property
    def size_threshold(self) -> float:
        """Smallest |U| the bound applies to: (t + eps) * m."""
        return (self.t + self.eps) * self.middle_layer_size


def kleitman_min_edges(n: int, r: int) -> int:
    """Minimum induced comparable pairs over all r-subsets of P(n).

    Computed as the edge count of the length-r initial segment of the
    centrality order, which Kleitman's theorem identifies as a minimizer.
    """
    if not 0 <= r <= (1 << n):
        raise ValueError(f"r must be in [0, 2**{n}], got {r}")
    return induced_edges(initial_segment(n, r))


@lru_cache(maxsize=4)
def _edge_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(sizes, edges) over every subset of P(n), indexed by subset bitmask.

    Subsets of the vertex set are themselves encoded as bitmasks over the
    2**n vertex ids, so n <= 4 keeps the table at 2**16 entries.
    """
    v = 1 << n
    adj = np.zeros(v, dtype=np.uint32)
    for i in range(v):
        bits = 0
        for j in range(v):
            if comparable(i, j):
                bits |= 1 << j
        adj[i] = bits
    masks = np.arange(1 << v, dtype=np.uint32)
    twice_edges = np.zeros(1 << v, dtype=np.int64)
    for i in range(v):
        present = (masks >> np.uint32(i)) & np.uint32(1)
        twice_edges += present * popcount(masks & adj[i])
    sizes = popcount(masks)
    return sizes, twice_edges // 2


def verify_kleitman_exhaustive(n: int, r: int) -> bool:
    """Check segment minimality against every r-subset of P(n)."""
    if n > _EXHAUSTIVE_N_CAP:
        raise FeasibilityError(
            f"exhaustive verification enumerates 2**(2**n) subsets; n={n} exceeds cap {_EXHAUSTIVE_N_CAP}"
        )
    if not 0 <= r <= (1 << n):
        raise ValueError(f"r must be in [0, 2**{n}], got {r}")
    sizes, edges = _edge_table(n)
    true_min = int(edges[sizes == r].min())
    return true_min == kleitman_min_edges(n, r)


def verify_kleitman_randomized(n: int, r: int, samples: int, seed: int) -> bool:
    """Try to beat the segment with `samples` uniform random r-subsets.

    Returns True when no sample has fewer induced comparable pairs than
    the segment value (the theorem says none can).
    """
    if n > _RANDOMIZED_N_CAP:
        raise FeasibilityError(
            f"randomized verification capped at n={_RANDOMIZED_N_CAP}, got {n}"
        )
    if not 0 <= r <= (1 << n):
        raise ValueError(f"r must be in [0, 2**{n}], got {r}")
    if samples < 1:
        raise ValueError("samples must be positive")
    v = 1 << n
    target = kleitman_min_edges(n, r)
    if r <= 1:
        # Every 0- or 1-subset has zero edges, the segment value.
        return True
    rng = np.random.default_rng(seed)
    chunk = max(1, (1 << 22) // v)
    done = 0
    while done < samples:
        batch = min(chunk, samples - done)
        done += batch
        u = rng.random((batch, v))
        picked = np.argpartition(u, r - 1, axis=1)[:, :r]
        ind = np.zeros((batch, v), dtype=np.int16)
        np.put_along_axis(ind, picked, 1, axis=1)
        below = zeta_transform_batch(ind, n)
        edges = (below * ind).sum(axis=1, dtype=np.int64) - r
        if (edges < target).any():
            return False
    return True


def density_lower_bound(params: DensityBoundParams, size_u: int) -> float:
    """Strict lower bound on induced edges for |U| >= (t + eps) * m.

    Callers compare induced_edges(U) against the returned real with a
    strict inequality.
    """
    if size_u < params.size_threshold:
        raise PreconditionError(
            f"bound needs |U| >= (t + eps)*m = {params.size_threshold:.3f}, got {size_u}"
        )
    t, eps, n = params.t, params.eps, params.n
    return eps * float(n) ** t * size_u / float(2 * t) ** (t + 1)
