"""Exact maximum antichains inside arbitrary vertex sets, with certificates.

Dilworth's theorem turns the problem into bipartite matching: split every
member of S into a left and a right copy, connect left A to right B when
A ⊂ B, and a maximum matching yields a minimum chain cover of size
|S| - matching.  The containment relation is transitive, so paths of
matched edges are automatically chains.  A maximum antichain of the same
size falls out of König's theorem: take the elements with neither copy in
the minimum vertex cover.  Every solve returns both objects and checks
them against each other, so a result is its own optimality proof.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from ._accel import njit
from .errors import FeasibilityError, InvariantViolation
from .lattice import VertexSet, comparable_pairs, induced_edges

__all__ = [
    "MatchingWitness",
    "is_antichain",
    "max_antichain_exact",
    "max_antichain_bruteforce",
    "comparable_pairs",
]

MAX_MEMBERS = 1_000_000
MAX_EDGES = 100_000_000
_MAX_TABLE_N = 24
_BRUTE_FORCE_CAP = 25


def is_antichain(s: VertexSet) -> bool:
    """True iff no member contains another."""
    return induced_edges(s) == 0


@dataclass(frozen=True)
class MatchingWitness:
    """Result of an exact solve: size, witness, cover, and matching."""

    alpha: int
    matching_size: int
    edge_count: int
    antichain: VertexSet
    chain_cover: tuple[tuple[int, ...], ...]


@njit(cache=True)
def _count_edges(members, in_set):
    total = 0
    for idx in range(len(members)):
        b = members[idx]
        if b == 0:
            continue
        s = (b - 1) & b
        while True:
            if in_set[s]:
                total += 1
            if s == 0:
                break
            s = (s - 1) & b
    return total


@njit(cache=True)
def _fill_edges(members, in_set, pos, rows, cols):
    e = 0
    for idx in range(len(members)):
        b = members[idx]
        if b == 0:
            continue
        s = (b - 1) & b
        while True:
            if in_set[s]:
                rows[e] = pos[s]
                cols[e] = idx
                e += 1
            if s == 0:
                break
            s = (s - 1) & b
    return e


@njit(cache=True)
def _alternating_reach(indptr, indices, match_left, match_right, z_left, z_right):
    # Depth-first alternating reachability from unmatched left vertices:
    # any edge leftwards out, matched edges back.  Reachability is a set,
    # so traversal order cannot affect the result.
    k = len(match_left)
    stack = np.empty(k, dtype=np.int64)
    top = 0
    for i in range(k):
        if match_left[i] < 0:
            z_left[i] = True
            stack[top] = i
            top += 1
    while top > 0:
        top -= 1
        u = stack[top]
        for e in range(indptr[u], indptr[u + 1]):
            j = indices[e]
            if not z_right[j]:
                z_right[j] = True
                w = match_right[j]
                if w >= 0 and not z_left[w]:
                    z_left[w] = True
                    stack[top] = w
                    top += 1


def _edge_arrays(s: VertexSet) -> tuple[np.ndarray, np.ndarray, int]:
    """Strict-containment edges of s as (sub-index, super-index) arrays."""
    n = s.n
    if len(s) > MAX_MEMBERS:
        raise FeasibilityError(f"|s| = {len(s)} exceeds the solver cap {MAX_MEMBERS}")
    if n > _MAX_TABLE_N:
        raise FeasibilityError(
            f"membership table needs 2**{n} entries; refusing beyond n={_MAX_TABLE_N}"
        )
    members = s.as_array()
    in_set = s.indicator()
    count = int(_count_edges(members, in_set)) if len(members) else 0
    if count > MAX_EDGES:
        raise FeasibilityError(
            f"comparable-pair count {count} exceeds the solver cap {MAX_EDGES}"
        )
    pos = np.zeros(1 << n, dtype=np.int32)
    pos[members] = np.arange(len(members), dtype=np.int32)
    rows = np.empty(count, dtype=np.int32)
    cols = np.empty(count, dtype=np.int32)
    if count:
        filled = int(_fill_edges(members, in_set, pos, rows, cols))
        assert filled == count
    return rows, cols, count


def max_antichain_exact(s: VertexSet) -> MatchingWitness:
    """Maximum antichain of s with a matched chain cover as certificate."""
    k = len(s)
    members = s.as_array()
    rows, cols, edge_count = _edge_arrays(s)

    if k == 0:
        return MatchingWitness(0, 0, 0, VertexSet(s.n, ()), ())

    biadj = csr_matrix(
        (np.ones(edge_count, dtype=np.uint8), (rows, cols)), shape=(k, k)
    )
    match_left = np.asarray(
        maximum_bipartite_matching(biadj, perm_type="column"), dtype=np.int64
    )
    match_right = np.full(k, -1, dtype=np.int64)
    matched = match_left >= 0
    match_right[match_left[matched]] = np.nonzero(matched)[0]
    matching_size = int(matched.sum())
    alpha = k - matching_size

    # Chains: follow matched successor edges from every chain head.
    chains: list[tuple[int, ...]] = []
    for i in range(k):
        if match_right[i] >= 0:
            continue
        chain = [int(members[i])]
        j = int(match_left[i])
        while j >= 0:
            chain.append(int(members[j]))
            j = int(match_left[j])
        chains.append(tuple(chain))

    z_left = np.zeros(k, dtype=np.bool_)
    z_right = np.zeros(k, dtype=np.bool_)
    _alternating_reach(
        biadj.indptr.astype(np.int64),
        biadj.indices.astype(np.int64),
        match_left,
        match_right,
        z_left,
        z_right,
    )
    witness_ids = members[z_left & ~z_right]
    witness = VertexSet(s.n, tuple(int(v) for v in witness_ids))

    result = MatchingWitness(alpha, matching_size, edge_count, witness, tuple(chains))
    _check_certificate(result, k)
    return result


def _check_certificate(w: MatchingWitness, set_size: int) -> None:
    if len(w.antichain) != w.alpha:
        raise InvariantViolation(
            f"witness size {len(w.antichain)} != alpha {w.alpha}"
        )
    if len(w.chain_cover) != w.alpha:
        raise InvariantViolation(
            f"chain cover has {len(w.chain_cover)} chains, expected {w.alpha}"
        )
    if sum(len(c) for c in w.chain_cover) != set_size:
        raise InvariantViolation("chain cover does not partition the input")
    if w.alpha != set_size - w.matching_size:
        raise InvariantViolation("alpha != |s| - matching_size")
    for chain in w.chain_cover:
        for a, b in zip(chain, chain[1:]):
            if a == b or (a & b) != a:
                raise InvariantViolation(f"cover chain not totally ordered at {a}, {b}")
    if not is_antichain(w.antichain):
        raise InvariantViolation("witness is not an antichain")


def max_antichain_bruteforce(s: VertexSet) -> int:
    """Branch-and-bound search over all antichain subsets of s."""
    k = len(s)
    if k > _BRUTE_FORCE_CAP:
        raise FeasibilityError(
            f"brute force capped at {_BRUTE_FORCE_CAP} members, got {k}"
        )
    members = s.members
    adj = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            a, b = members[i], members[j]
            common = a & b
            if common == a or common == b:
                adj[i] |= 1 << j
                adj[j] |= 1 << i

    best = 0

    def grow(cand: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            grow(cand & ~adj[v], size + 1)

    grow((1 << k) - 1, 0)
    return best
