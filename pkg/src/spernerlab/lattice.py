"""Core model of the Boolean lattice and its comparability graph.

The power set P(n) of [n] = {1, ..., n} is viewed as a graph G: vertices are
the 2**n subsets, and two distinct subsets are adjacent exactly when one
contains the other.  Antichains are the independent sets of G.  Vertices are
encoded as bitmasks (bit i-1 set iff element i is in the subset), which makes
containment a single AND and keeps whole-lattice scans vectorizable.

The module also fixes the "centrality order": vertices sorted by how close
their layer (popcount) is to the middle layer n//2, ties between layers
resolved toward the larger layer, ties inside a layer by ascending bitmask.
Initial segments of this order minimize induced comparable pairs among all
vertex sets of the same size (Kleitman's theorem), which is what makes the
order worth pinning down exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from ._bitops import (
    all_masks,
    iter_strict_submasks,
    popcount,
    zeta_transform,
)
from .errors import FeasibilityError

# Beyond this size the quadratic pairwise edge count is slower than one
# subset-sum transform over the full lattice.
_NAIVE_EDGE_CUTOFF = 4096
# The transform allocates an int64 array of length 2**n.
_MAX_TRANSFORM_N = 24

N_MAX = 30


def comparable(a: int, b: int) -> bool:
    """True when the distinct subsets a, b satisfy a ⊂ b or b ⊂ a."""
    if a == b:
        return False
    common = a & b
    return common == a or common == b


def layer_of(mask: int) -> int:
    """Layer index = cardinality of the encoded subset."""
    return mask.bit_count()


def degree_in_full_lattice(a: int, n: int) -> int:
    """Degree of vertex `a` in the comparability graph of all of P(n).

    Every proper subset and every proper superset of `a` is a neighbour:
    2**|a| - 1 of the former, 2**(n - |a|) - 1 of the latter.
    """
    k = a.bit_count()
    return (1 << k) + (1 << (n - k)) - 2


@dataclass(frozen=True)
class LatticeParams:
    """Ambient lattice size plus the derived quantities used everywhere."""

    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= N_MAX:
            raise ValueError(f"n must be in [1, {N_MAX}], got {self.n}")

    @property
    def vertex_count(self) -> int:
        return 1 << self.n

    @property
    def middle_layer_size(self) -> int:
        """m = C(n, n//2), the size of a largest layer."""
        return math.comb(self.n, self.n // 2)

    @property
    def comparable_pair_count(self) -> int:
        """Number of edges of the full comparability graph: 3**n - 2**n."""
        return 3**self.n - 2**self.n


@dataclass(frozen=True)
class VertexSet:
    """An explicit set of vertices of P(n).

    `members` is strictly increasing and duplicate-free; both properties are
    validated on construction so downstream code can binary-search and diff
    without re-checking.
    """

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= N_MAX:
            raise ValueError(f"n must be in [0, {N_MAX}], got {self.n}")
        if self.members:
            arr = np.asarray(self.members, dtype=np.int64)
            if arr[0] < 0 or arr[-1] >= (1 << self.n):
                raise ValueError(f"member ids must lie in [0, 2**{self.n})")
            if len(arr) > 1 and not (np.diff(arr) > 0).all():
                raise ValueError("members must be strictly increasing")

    @classmethod
    def from_ids(cls, n: int, ids: Iterable[int]) -> "VertexSet":
        """Build from any iterable of ids, sorting and deduplicating."""
        arr = np.unique(np.fromiter((int(i) for i in ids), dtype=np.int64))
        return cls(n, tuple(int(v) for v in arr))

    @classmethod
    def from_mask_array(cls, n: int, mask: np.ndarray) -> "VertexSet":
        """Build from a boolean indicator over [0, 2**n)."""
        ids = np.nonzero(mask)[0]
        return cls(n, tuple(int(v) for v in ids))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, item: int) -> bool:
        return item in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def indicator(self) -> np.ndarray:
        """Boolean membership table over [0, 2**n)."""
        out = np.zeros(1 << self.n, dtype=bool)
        if self.members:
            out[self.as_array()] = True
        return out

    def layer_counts(self) -> np.ndarray:
        """How many members sit in each layer 0..n."""
        out = np.zeros(self.n + 1, dtype=np.int64)
        if self.members:
            layers = popcount(self.as_array())
            np.add.at(out, layers, 1)
        return out


@dataclass(frozen=True)
class CentralityOrder:
    """Total order of P(n) by distance from the middle layer.

    `layer_sequence` lists layers from most to least central; vertices within
    one layer are ordered by ascending bitmask.
    """

    n: int
    layer_sequence: tuple[int, ...]

    def permutation(self) -> np.ndarray:
        """Vertex ids in centrality order (position -> id)."""
        return _centrality_permutation(self.n)

    def rank(self) -> np.ndarray:
        """Inverse permutation (id -> position)."""
        return _centrality_rank(self.n)


def centrality_layer_sequence(n: int) -> tuple[int, ...]:
    h = n // 2
    seq = [h]
    for step in range(1, n + 1):
        if h + step <= n:
            seq.append(h + step)
        if h - step >= 0:
            seq.append(h - step)
    return tuple(seq)


def centrality_order(n: int) -> CentralityOrder:
    if not 0 <= n <= N_MAX:
        raise ValueError(f"n must be in [0, {N_MAX}], got {n}")
    return CentralityOrder(n, centrality_layer_sequence(n))


@lru_cache(maxsize=8)
def _centrality_permutation(n: int) -> np.ndarray:
    masks = all_masks(n)
    layers = popcount(masks)
    parts = [np.nonzero(layers == k)[0] for k in centrality_layer_sequence(n)]
    perm = np.concatenate(parts) if parts else np.zeros(1, dtype=np.int64)
    perm.setflags(write=False)
    return perm


@lru_cache(maxsize=8)
def _centrality_rank(n: int) -> np.ndarray:
    perm = _centrality_permutation(n)
    rank = np.empty_like(perm)
    rank[perm] = np.arange(len(perm), dtype=np.int64)
    rank.setflags(write=False)
    return rank


def initial_segment(n: int, r: int) -> VertexSet:
    """The first r vertices of the centrality order, as a VertexSet."""
    if not 0 <= r <= (1 << n):
        raise ValueError(f"segment length must be in [0, 2**{n}], got {r}")
    ids = np.sort(_centrality_permutation(n)[:r])
    return VertexSet(n, tuple(int(v) for v in ids))


def layer_vertex_set(n: int, k: int) -> VertexSet:
    """All vertices of layer k, ascending."""
    masks = all_masks(n)
    ids = masks[popcount(masks) == k]
    return VertexSet(n, tuple(int(v) for v in ids))


# ---------------------------------------------------------------------------
# Induced comparable-pair counting
# ---------------------------------------------------------------------------

def induced_edges(vertex_set: VertexSet, method: str = "auto") -> int:
    """Number of comparable pairs inside `vertex_set`.

    Two exact algorithms are kept side by side on purpose: a quadratic
    pairwise scan, and a subset-sum transform that counts, for every member
    A, how many members are proper subsets of A.  `auto` picks the pairwise
    scan for at most 4096 members and the transform above that.
    """
    k = len(vertex_set)
    if method == "auto":
        method = "naive" if k <= _NAIVE_EDGE_CUTOFF else "sos"
    if method == "naive":
        return _induced_edges_naive(vertex_set)
    if method == "sos":
        return _induced_edges_sos(vertex_set)
    raise ValueError(f"unknown method {method!r}")


def _induced_edges_naive(vertex_set: VertexSet) -> int:
    ids = vertex_set.as_array()
    k = len(ids)
    if k < 2:
        return 0
    total = 0
    # Row-chunked broadcast keeps the k x k boolean block under ~64 MB.
    chunk = max(1, (1 << 22) // max(k, 1))
    for lo in range(0, k, chunk):
        rows = ids[lo : lo + chunk, None]
        common = rows & ids[None, :]
        comp = (common == rows) | (common == ids[None, :])
        total += int(comp.sum())
    # Every unordered comparable pair was seen twice; the k diagonal hits
    # (a compared with itself) are discarded first.
    return (total - k) // 2


def _induced_edges_sos(vertex_set: VertexSet) -> int:
    n = vertex_set.n
    if n > _MAX_TRANSFORM_N:
        raise FeasibilityError(
            f"subset-sum edge count needs a 2**{n} table; refusing beyond n={_MAX_TRANSFORM_N}"
        )
    ind = np.zeros(1 << n, dtype=np.int64)
    ids = vertex_set.as_array()
    ind[ids] = 1
    below = zeta_transform(ind, n)
    # below[A] counts members that are subsets of A, A itself included.
    return int(below[ids].sum()) - len(ids)


def comparable_pairs(vertex_set: VertexSet) -> Iterator[tuple[int, int]]:
    """Stream the ordered comparable pairs (a, b) with a ⊂ b, each once.

    For each member b (ascending) the proper sub-bitmasks of b are
    enumerated (descending) and filtered through the membership table; no
    all-pairs scan is ever made, so sparse sets stream in output-sensitive
    time.
    """
    members = vertex_set.member_set
    for b in vertex_set.members:
        for a in iter_strict_submasks(b):
            if a in members:
                yield (a, b)


# ---------------------------------------------------------------------------
# VertexSet file format
# ---------------------------------------------------------------------------

def write_vertex_set(vertex_set: VertexSet, path: str | Path) -> None:
    """Write the one-id-per-line text format with an `n=<value>` header."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"n={vertex_set.n}\n")
        for v in vertex_set.members:
            fh.write(f"{v}\n")


def read_vertex_set(path: str | Path) -> VertexSet:
    """Parse the format written by `write_vertex_set`, validating strictly."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if not header.startswith("n="):
            raise ValueError(f"{path}: first line must be 'n=<value>', got {header!r}")
        try:
            n = int(header[2:])
        except ValueError as exc:
            raise ValueError(f"{path}: bad lattice size in header {header!r}") from exc
        ids = []
        prev = -1
        for line_no, line in enumerate(fh, start=2):
            text = line.strip()
            if not text:
                continue
            try:
                v = int(text)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_no}: not a vertex id: {text!r}") from exc
            if v <= prev:
                raise ValueError(f"{path}:{line_no}: ids must be strictly increasing")
            prev = v
            ids.append(v)
    return VertexSet(n, tuple(ids))
