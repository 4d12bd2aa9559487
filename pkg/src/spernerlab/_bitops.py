"""Bitmask helpers shared across the package.

Subsets of [n] = {1, ..., n} are encoded as integer bitmasks: bit i-1 is set
exactly when element i belongs to the subset.  All helpers below treat masks
as plain integers so they compose with both numpy arrays and Python ints.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np


def popcount(arr: np.ndarray) -> np.ndarray:
    """Per-element number of set bits, as int64."""
    return np.bitwise_count(arr).astype(np.int64)


def all_masks(n: int) -> np.ndarray:
    """All 2**n masks in ascending order."""
    return np.arange(1 << n, dtype=np.int64)


def submask_array(mask: int) -> np.ndarray:
    """All submasks of `mask` (including 0 and `mask`), ascending.

    Built by depositing the bits of 0..2**k-1 onto the k set positions of
    `mask`; deposition preserves order, so the output is sorted.
    """
    positions = [i for i in range(mask.bit_length()) if (mask >> i) & 1]
    k = len(positions)
    js = np.arange(1 << k, dtype=np.int64)
    out = np.zeros(1 << k, dtype=np.int64)
    for idx, pos in enumerate(positions):
        out |= ((js >> idx) & 1) << pos
    return out


def strict_submask_array(mask: int) -> np.ndarray:
    """Proper submasks of `mask` (0 included, `mask` excluded), ascending."""
    return submask_array(mask)[:-1]


def strict_supermask_array(mask: int, n: int) -> np.ndarray:
    """Proper supermasks of `mask` within [0, 2**n), ascending."""
    free = ~mask & ((1 << n) - 1)
    return (mask | submask_array(free))[1:]


def iter_strict_submasks(mask: int) -> Iterator[int]:
    """Yield proper submasks of `mask` in descending order (0 last)."""
    if mask == 0:
        return
    s = (mask - 1) & mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def zeta_transform(values: np.ndarray, n: int) -> np.ndarray:
    """Subset-sum (zeta) transform: out[A] = sum of values[B] over B subseteq A.

    In-place butterfly over each bit; input must have length 2**n.  Returns a
    new array, leaving `values` untouched.
    """
    f = values.copy()
    for i in range(n):
        f = f.reshape(-1, 2, 1 << i)
        f[:, 1, :] += f[:, 0, :]
    return f.reshape(-1)


def zeta_transform_batch(values: np.ndarray, n: int) -> np.ndarray:
    """Row-wise zeta transform for a (batch, 2**n) matrix."""
    f = values.copy()
    rows = f.shape[0]
    for i in range(n):
        f = f.reshape(rows, -1, 2, 1 << i)
        f[:, :, 1, :] += f[:, :, 0, :]
    return f.reshape(rows, -1)


def superset_transform(values: np.ndarray, n: int) -> np.ndarray:
    """out[A] = sum of values[B] over B superseteq A."""
    f = values.copy()
    for i in range(n):
        f = f.reshape(-1, 2, 1 << i)
        f[:, 0, :] += f[:, 1, :]
    return f.reshape(-1)
