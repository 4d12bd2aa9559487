"""Exact antichain census at small n, greedy constructions, and brackets.

The census is computed twice by structurally different algorithms (a
pruned depth-first enumeration in centrality order, and either a
layer-by-layer profile dynamic program or a second DFS over the plain
bitmask order) and the counts must agree; no external table is treated
as ground truth.  Counting antichains is the finite-n face of the
container bracketing arithmetic, which `proposition_bracket` evaluates
in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import njit
from ._bitops import superset_transform, zeta_transform
from .errors import ConstructionError, FeasibilityError, InvariantViolation, PreconditionError
from .lattice import VertexSet, centrality_layer_sequence, centrality_order, comparable

__all__ = [
    "AntichainCensus",
    "census",
    "greedy_middle_layers",
    "proposition_bracket",
]

_MAX_CENSUS_N = 6
_MAX_POOL_N = 24


@dataclass(frozen=True)
class AntichainCensus:
    """counts[s] = number of antichains of size s in P(n), s = 0..m."""

    n: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


def _comparability_masks(order: np.ndarray) -> np.ndarray:
    """adj[i] = bitmask over order positions comparable to order[i]."""
    k = len(order)
    adj = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if comparable(int(order[i]), int(order[j])):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return np.array(adj, dtype=np.uint64)


@njit(cache=True)
def _dfs_census_kernel(adj, max_size):
    # Every node of the search tree is an antichain; children extend it
    # by one later, incomparable vertex.  The stack holds the remaining
    # candidate mask per depth, so depth equals antichain size.
    counts = np.zeros(max_size + 1, dtype=np.int64)
    nverts = adj.shape[0]
    one = np.uint64(1)
    zero = np.uint64(0)
    full = zero
    for i in range(nverts):
        full |= one << np.uint64(i)
    stack = np.empty(max_size + 2, dtype=np.uint64)
    sp = 0
    stack[0] = full
    counts[0] = 1
    while sp >= 0:
        cand = stack[sp]
        if cand == zero:
            sp -= 1
            continue
        lowbit = cand & (~cand + one)
        low = lowbit
        i = 0
        while low != one:
            low >>= one
            i += 1
        cand ^= lowbit
        stack[sp] = cand
        sp += 1
        stack[sp] = cand & ~adj[i]
        counts[sp] += 1
    return counts


def _census_dfs(n: int, order: np.ndarray) -> list[int]:
    m = math.comb(n, n // 2)
    counts = _dfs_census_kernel(_comparability_masks(order), m)
    return [int(c) for c in counts]


def _census_profile_dp(n: int) -> list[int]:
    """Bottom-up DP: state = which current-layer vertices sit above a pick.

    Chosen members only ever forbid supersets in higher layers, so the
    taint propagates one layer at a time through the subset relation.
    """
    m = math.comb(n, n // 2)
    layers = [
        [v for v in range(1 << n) if bin(v).count("1") == k] for k in range(n + 1)
    ]
    index_in_layer = [
        {v: i for i, v in enumerate(layer)} for layer in layers
    ]

    dp: dict[int, np.ndarray] = {0: np.zeros(m + 1, dtype=np.int64)}
    dp[0][0] = 1
    for k in range(n + 1):
        layer = layers[k]
        width = len(layer)
        if k < n:
            # For each next-layer vertex, the mask of its subsets here.
            down = []
            for v in layers[k + 1]:
                mask = 0
                for b in range(n):
                    if v & (1 << b):
                        mask |= 1 << index_in_layer[k][v & ~(1 << b)]
                down.append(mask)
        new_dp: dict[int, np.ndarray] = {}
        for taint, arr in dp.items():
            free = ((1 << width) - 1) & ~taint
            x = free
            while True:
                picked = taint | x
                size_x = x.bit_count()
                if k < n:
                    nxt = 0
                    for j, mask in enumerate(down):
                        if mask & picked:
                            nxt |= 1 << j
                else:
                    nxt = 0
                bucket = new_dp.get(nxt)
                if bucket is None:
                    bucket = np.zeros(m + 1, dtype=np.int64)
                    new_dp[nxt] = bucket
                if size_x:
                    bucket[size_x:] += arr[: m + 1 - size_x]
                else:
                    bucket += arr
                if x == 0:
                    break
                x = (x - 1) & free
        dp = new_dp
    total = np.zeros(m + 1, dtype=np.int64)
    for arr in dp.values():
        total += arr
    return [int(c) for c in total]


def _census_python_dfs(n: int) -> list[int]:
    """Recursive enumeration over ascending bitmask order, no compilation."""
    m = math.comb(n, n // 2)
    order = np.arange(1 << n, dtype=np.int64)
    adj = [int(a) for a in _comparability_masks(order)]
    counts = [0] * (m + 1)

    def rec(cand: int, size: int) -> None:
        counts[size] += 1
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            rec(cand & ~adj[i], size + 1)

    rec((1 << (1 << n)) - 1, 0)
    return counts


def census(n: int, cross_check: bool = True) -> AntichainCensus:
    """Exact antichain-by-size counts for P(n), n <= 6.

    With `cross_check` (the default) the counts are recomputed by the
    independent second route and any disagreement raises.
    """
    if not 0 <= n <= _MAX_CENSUS_N:
        raise FeasibilityError(
            f"census is exact enumeration; supported range is 0 <= n <= {_MAX_CENSUS_N}"
        )
    primary = _census_dfs(n, centrality_order(n).permutation())
    if cross_check:
        secondary = _census_profile_dp(n) if n <= 5 else _census_python_dfs(n)
        if primary != secondary:
            raise InvariantViolation(
                f"census enumerators disagree at n={n}: {primary} vs {secondary}"
            )
    return AntichainCensus(n, tuple(primary))


def _middle_pool(n: int, t: int) -> list[int]:
    """Vertices of the t most central layers, in centrality order."""
    layers = centrality_layer_sequence(n)[:t]
    pool: list[int] = []
    for k in layers:
        pool.extend(v for v in range(1 << n) if bin(v).count("1") == k)
    return pool


def greedy_middle_layers(n: int, t: int, s: int, seed: int) -> VertexSet:
    """Greedy antichain of size exactly s inside the t middle layers.

    A randomized pass over the shuffled pool runs first; if it stalls
    below s, a deterministic scan in centrality order retries.  Both
    exhausting below s raises ConstructionError carrying the best
    achieved size.
    """
    if n > _MAX_POOL_N:
        raise FeasibilityError(f"greedy construction capped at n={_MAX_POOL_N}")
    if not 1 <= t <= n + 1:
        raise ValueError(f"t must lie in [1, n+1], got {t}")
    if s < 0:
        raise ValueError(f"target size must be nonnegative, got {s}")
    if s == 0:
        return VertexSet(n, ())

    pool = _middle_pool(n, t)
    rng = np.random.default_rng(seed)
    shuffled = [pool[i] for i in rng.permutation(len(pool))]

    best: list[int] = []
    for ordering in (shuffled, pool):
        chosen: list[int] = []
        for v in ordering:
            if any(comparable(v, u) for u in chosen):
                continue
            chosen.append(v)
            if len(chosen) == s:
                return VertexSet.from_ids(n, chosen)
        if len(chosen) > len(best):
            best = chosen
    raise ConstructionError(
        f"greedy scan of the {t} middle layers of P({n}) reached size "
        f"{len(best)}, short of the target {s}",
        achieved=len(best),
    )


def _log_binom(total: float, k: int) -> float:
    """log C(total, k) for real total >= k, via log-gamma."""
    return (
        math.lgamma(total + 1.0)
        - math.lgamma(k + 1.0)
        - math.lgamma(total - k + 1.0)
    )


def proposition_bracket(
    n: int, s: int, t: int, eps: float
) -> tuple[float, float]:
    """Log-space bracket on the number of size-s antichains in P(n).

    Lower endpoint: the greedy count C(pool - (s-1)*D, s), where pool is
    the size of the t middle layers and D the maximum comparability
    degree within them (each pick eliminates at most D+1 candidates).
    Returns -inf when the slack is exhausted.  Upper endpoint: the
    container-counting bound C((t+2*eps)m, s) as a generalized binomial.
    """
    if n > _MAX_POOL_N:
        raise FeasibilityError(f"bracket arithmetic capped at n={_MAX_POOL_N}")
    if not 1 <= t <= n + 1:
        raise ValueError(f"t must lie in [1, n+1], got {t}")
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    m = math.comb(n, n // 2)
    if s > (t + 2 * eps) * m:
        raise PreconditionError(
            f"s = {s} exceeds the upper-bracket support (t+2*eps)m = {(t + 2 * eps) * m}"
        )
    if s == 0:
        return (0.0, 0.0)

    pool = _middle_pool(n, t)
    ind = np.zeros(1 << n, dtype=np.int64)
    ind[pool] = 1
    degrees = zeta_transform(ind, n) + superset_transform(ind, n) - 2
    max_deg = int(degrees[pool].max())
    slack = len(pool) - (s - 1) * max_deg
    lower = _log_binom(float(slack), s) if slack >= s else float("-inf")
    upper = _log_binom((t + 2 * eps) * m, s)
    return (lower, upper)
