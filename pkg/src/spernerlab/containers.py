"""Two-phase container construction for antichains in the subset lattice.

Given an antichain I, the process repeatedly removes the maximum-degree
vertex u of the shrinking comparability graph (ties broken by a fixed
total order).  Non-members of I are simply deleted.  A member whose
degree is at least the current phase threshold is recorded (phase 1 into
S1, phase 2 into S2) and deleted together with its whole remaining
neighborhood.  A member below the threshold is recorded and deleted
alone; the surviving vertex pool is snapshotted as f(S1) the first time
(ending phase 1, threshold n^{t+0.9}) and as g the second time
(threshold eps^2 * n^t), terminating the run.

The fingerprint of the construction: S1 and S2 are small, f and g are
sparse, and I ⊆ S1 ∪ S2 ∪ g, so the few possible (S1, S2) pairs index a
small family of containers covering every antichain.  Degrees only ever
decrease, so the selection loop runs on a lazy max-heap: popped entries
are re-validated against the current degree and re-pushed when stale.
A popped entry that matches its current degree is exactly the
(degree, tie-rank) maximum, because every other live vertex still holds
an entry encoding at least its true degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import median
from typing import NamedTuple

import numpy as np

from ._accel import njit
from ._bitops import superset_transform, zeta_transform
from .errors import FeasibilityError, PreconditionError
from .lattice import VertexSet, centrality_order, induced_edges

__all__ = [
    "ContainerParams",
    "ContainerResult",
    "TraceStep",
    "build_containers",
    "check_invariants",
    "verify_idempotence",
    "container_census",
    "CensusItem",
    "CensusSummary",
]

_MAX_PROCESS_N = 22

_BRANCH_NAMES = ("nonmember", "heavy", "light")


def _loose_eps_cap(t: int) -> Fraction:
    return Fraction(1, (2 * t) ** (t + 1))


@dataclass(frozen=True)
class ContainerParams:
    """Inputs of the two-phase process.

    `eps` must satisfy 0 < eps <= 1/(2t)^(t+1) unless `allow_loose_eps`
    is set, in which case any eps in (0, 1] is accepted and the
    eps-dependent size guarantees lose their theoretical backing.
    `tie_order` is either a named order ("bitmask" or "centrality") or
    an explicit permutation of [0, 2^n).
    """

    n: int
    t: int
    eps: float
    tie_order: str | tuple[int, ...] = "bitmask"
    allow_loose_eps: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.n <= _MAX_PROCESS_N:
            raise FeasibilityError(
                f"container process supports 1 <= n <= {_MAX_PROCESS_N}, got {self.n}"
            )
        if not (isinstance(self.t, int) and self.t >= 1):
            raise ValueError(f"t must be a positive integer, got {self.t!r}")
        cap = 1.0 if self.allow_loose_eps else float(_loose_eps_cap(self.t))
        if not 0.0 < self.eps <= cap:
            raise ValueError(
                f"eps must lie in (0, {cap}] for t={self.t}, got {self.eps}"
            )
        if isinstance(self.tie_order, str):
            if self.tie_order not in ("bitmask", "centrality"):
                raise ValueError(f"unknown tie order {self.tie_order!r}")
        else:
            perm = np.asarray(self.tie_order, dtype=np.int64)
            if perm.shape != (1 << self.n,) or not np.array_equal(
                np.sort(perm), np.arange(1 << self.n)
            ):
                raise ValueError("tie_order must be a permutation of [0, 2^n)")

    @property
    def theta1(self) -> float:
        return float(self.n) ** (self.t + 0.9)

    @property
    def theta2(self) -> float:
        return self.eps * self.eps * float(self.n) ** self.t

    @property
    def middle_layer_size(self) -> int:
        return math.comb(self.n, self.n // 2)

    def vertex_of_rank(self) -> np.ndarray:
        """The tie order as an array: position r holds the r-th vertex."""
        if isinstance(self.tie_order, str):
            if self.tie_order == "bitmask":
                return np.arange(1 << self.n, dtype=np.int64)
            return centrality_order(self.n).permutation()
        return np.asarray(self.tie_order, dtype=np.int64)


class TraceStep(NamedTuple):
    step: int
    phase: int
    vertex: int
    degree: int
    branch: str


@dataclass(frozen=True)
class ContainerResult:
    """Output of one run: the selected sets, both snapshots, and a trace."""

    s1: VertexSet
    s2: VertexSet
    f_s1: VertexSet
    g: VertexSet
    trace: tuple[TraceStep, ...] | None = None


@njit(cache=True)
def _heap_push(heap, hn, key):
    i = hn
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= key:
            break
        heap[i] = heap[parent]
        i = parent
    heap[i] = key
    return hn + 1


@njit(cache=True)
def _heap_pop(heap, hn):
    top = heap[0]
    hn -= 1
    key = heap[hn]
    i = 0
    while True:
        c = 2 * i + 1
        if c >= hn:
            break
        if c + 1 < hn and heap[c + 1] < heap[c]:
            c += 1
        if heap[c] >= key:
            break
        heap[i] = heap[c]
        i = c
    heap[i] = key
    return top, hn


@njit(cache=True)
def _delete_vertex(v, n, alive, deg):
    # Remove v; every surviving comparable loses one degree.
    alive[v] = False
    deg[v] = 0
    s = (v - 1) & v
    while True:
        if alive[s]:
            deg[s] -= 1
        if s == 0:
            break
        s = (s - 1) & v
    size = 1 << n
    s = (v + 1) | v
    while s < size:
        if alive[s]:
            deg[s] -= 1
        s = (s + 1) | v


@njit(cache=True)
def _process_kernel(n, in_i, vertex_of, theta1, theta2, want_trace):
    size = 1 << n
    deg = np.empty(size, dtype=np.int64)
    for v in range(size):
        x = v
        k = 0
        while x:
            x &= x - 1
            k += 1
        deg[v] = (1 << k) + (1 << (n - k)) - 2
    alive = np.ones(size, dtype=np.bool_)

    # Keys sort by descending degree, then ascending tie rank; `size`
    # exceeds every degree, so size - deg stays positive.  Each vertex
    # owns at most one live entry: a fresh key is pushed only when its
    # previous entry has just been popped stale.
    heap = np.empty(size + 1, dtype=np.int64)
    hn = 0
    for r in range(size):
        v = vertex_of[r]
        hn = _heap_push(heap, hn, ((size - deg[v]) << n) | r)

    s1 = np.empty(size, dtype=np.int64)
    s2 = np.empty(size, dtype=np.int64)
    n1 = 0
    n2 = 0
    f_mask = np.zeros(size, dtype=np.bool_)
    g_mask = np.zeros(size, dtype=np.bool_)
    f_set = False
    g_set = False
    nbhd = np.empty(size, dtype=np.int64)
    tr_vertex = np.empty(size if want_trace else 0, dtype=np.int64)
    tr_degree = np.empty(size if want_trace else 0, dtype=np.int64)
    tr_phase = np.empty(size if want_trace else 0, dtype=np.int8)
    tr_branch = np.empty(size if want_trace else 0, dtype=np.int8)
    tr_n = 0

    phase = 1
    while hn > 0:
        key, hn = _heap_pop(heap, hn)
        r = key & (size - 1)
        v = vertex_of[r]
        if not alive[v]:
            continue
        d = deg[v]
        if size - (key >> n) != d:
            hn = _heap_push(heap, hn, ((size - d) << n) | r)
            continue

        if not in_i[v]:
            branch = 0
            _delete_vertex(v, n, alive, deg)
        else:
            theta = theta1 if phase == 1 else theta2
            if d >= theta:
                branch = 1
                cnt = 0
                s = (v - 1) & v
                while True:
                    if alive[s]:
                        nbhd[cnt] = s
                        cnt += 1
                    if s == 0:
                        break
                    s = (s - 1) & v
                s = (v + 1) | v
                while s < size:
                    if alive[s]:
                        nbhd[cnt] = s
                        cnt += 1
                    s = (s + 1) | v
                _delete_vertex(v, n, alive, deg)
                for i in range(cnt):
                    _delete_vertex(nbhd[i], n, alive, deg)
            else:
                branch = 2
                _delete_vertex(v, n, alive, deg)
            if phase == 1:
                s1[n1] = v
                n1 += 1
            else:
                s2[n2] = v
                n2 += 1

        if want_trace:
            tr_vertex[tr_n] = v
            tr_degree[tr_n] = d
            tr_phase[tr_n] = phase
            tr_branch[tr_n] = branch
            tr_n += 1

        if branch == 2:
            if phase == 1:
                f_mask[:] = alive
                f_set = True
                phase = 2
            else:
                g_mask[:] = alive
                g_set = True
                break

    return (
        s1[:n1],
        s2[:n2],
        f_mask,
        f_set,
        g_mask,
        g_set,
        tr_vertex[:tr_n],
        tr_degree[:tr_n],
        tr_phase[:tr_n],
        tr_branch[:tr_n],
    )


def build_containers(
    i_set: VertexSet, params: ContainerParams, want_trace: bool = False
) -> ContainerResult:
    """Run the two-phase process on the antichain `i_set`.

    If the vertex pool empties before a below-threshold member is
    selected, the pending snapshot (f, then g) is defined as the empty
    set; the guarantees hold vacuously.
    """
    if i_set.n != params.n:
        raise ValueError(f"vertex set has n={i_set.n}, params have n={params.n}")
    if induced_edges(i_set) != 0:
        raise PreconditionError("input is not an antichain")

    (
        s1_arr,
        s2_arr,
        f_mask,
        f_set,
        g_mask,
        g_set,
        tr_vertex,
        tr_degree,
        tr_phase,
        tr_branch,
    ) = _process_kernel(
        params.n,
        i_set.indicator(),
        params.vertex_of_rank(),
        params.theta1,
        params.theta2,
        want_trace,
    )

    n = params.n
    empty = VertexSet(n, ())
    trace = None
    if want_trace:
        trace = tuple(
            TraceStep(i + 1, int(p), int(v), int(d), _BRANCH_NAMES[b])
            for i, (p, v, d, b) in enumerate(
                zip(tr_phase, tr_vertex, tr_degree, tr_branch)
            )
        )
    return ContainerResult(
        s1=VertexSet.from_ids(n, s1_arr),
        s2=VertexSet.from_ids(n, s2_arr),
        f_s1=VertexSet.from_mask_array(n, f_mask) if f_set else empty,
        g=VertexSet.from_mask_array(n, g_mask) if g_set else empty,
        trace=trace,
    )


def _degrees_within(vs: VertexSet) -> np.ndarray:
    """Degree of each member inside the induced comparability subgraph."""
    if not vs.members:
        return np.zeros(0, dtype=np.int64)
    ind = vs.indicator().astype(np.int64)
    below = zeta_transform(ind, vs.n)
    above = superset_transform(ind, vs.n)
    members = vs.as_array()
    return below[members] + above[members] - 2


def check_invariants(
    i_set: VertexSet, params: ContainerParams, result: ContainerResult
) -> tuple[str, ...]:
    """All guarantees of the construction, checked exactly.

    Returns a tuple of violation messages, empty when every guarantee
    holds.  Size bounds against the irrational threshold n^{t+0.9} are
    decided in integers by raising both sides to the tenth power; the
    eps-dependent bounds use exact rational arithmetic on the binary
    value of eps.
    """
    n, t = params.n, params.t
    eps = Fraction(params.eps)
    m = params.middle_layer_size
    members = i_set.member_set
    s1, s2 = result.s1.member_set, result.s2.member_set
    f, g = result.f_s1.member_set, result.g.member_set
    failures: list[str] = []

    if s1 & s2:
        failures.append("s1 and s2 intersect")
    if not (s1 <= members and s2 <= members):
        failures.append("s1 or s2 is not contained in the input antichain")
    if not s2 <= f:
        failures.append("s2 is not contained in f(s1)")
    if (s1 | s2) & g:
        failures.append("s1 ∪ s2 meets g")
    if not members <= (s1 | s2 | g):
        failures.append("input antichain is not covered by s1 ∪ s2 ∪ g")

    # |s1| <= 2^n / n^{t+0.9}, in integers after the tenth power.
    if len(s1) ** 10 * n ** (10 * t + 9) > 2 ** (10 * n):
        failures.append(f"|s1| = {len(s1)} exceeds 2^n/n^(t+0.9)")
    if len(s1 | s2) * eps**2 * n**t > (t + 2) * m:
        failures.append(f"|s1 ∪ s2| = {len(s1 | s2)} exceeds (t+2)m/(eps^2 n^t)")
    if len(f) >= (t + 1 + eps) * m:
        failures.append(f"|f(s1)| = {len(f)} reaches (t+1+eps)m")
    if len(g) > (t + eps) * m:
        failures.append(f"|g| = {len(g)} exceeds (t+eps)m")

    f_deg = _degrees_within(result.f_s1)
    if len(f_deg) and int(f_deg.max()) ** 10 > n ** (10 * t + 9):
        failures.append(f"max degree {int(f_deg.max())} inside f exceeds n^(t+0.9)")
    g_deg = _degrees_within(result.g)
    if len(g_deg):
        g_max = int(g_deg.max())
        if g_max > eps**2 * n**t:
            failures.append(f"max degree {g_max} inside g exceeds eps^2 n^t")
        g_edges = int(g_deg.sum()) // 2
        if g_edges > eps**2 * n**t * len(g):
            failures.append(f"{g_edges} edges inside g exceed eps^2 n^t |g|")

    return tuple(failures)


def verify_idempotence(
    i_set: VertexSet,
    params: ContainerParams,
    first: ContainerResult | None = None,
) -> bool:
    """Rerunning on S1 ∪ S2 must reproduce the full result exactly.

    This is the constructive form of the claim that f and g depend only
    on the selected sets, not on the rest of the antichain.  `first`
    optionally supplies an already computed run on `i_set`.
    """
    if first is None:
        first = build_containers(i_set, params)
    rerun_input = VertexSet.from_ids(
        params.n, first.s1.members + first.s2.members
    )
    second = build_containers(rerun_input, params)
    return (
        first.s1 == second.s1
        and first.s2 == second.s2
        and first.f_s1 == second.f_s1
        and first.g == second.g
    )


@dataclass(frozen=True)
class CensusItem:
    index: int
    ok: bool
    failures: tuple[str, ...]
    sizes: tuple[int, int, int, int] | None


@dataclass(frozen=True)
class CensusSummary:
    """Per-input verdicts plus min/median/max of |s1|, |s2|, |f|, |g|."""

    items: tuple[CensusItem, ...]
    aggregates: dict[str, tuple[int, float, int]]

    @property
    def all_ok(self) -> bool:
        return all(item.ok for item in self.items)


def container_census(
    antichains: list[VertexSet] | tuple[VertexSet, ...],
    params: ContainerParams,
) -> CensusSummary:
    """Run and verify a batch; per-item failures do not abort the rest."""
    items: list[CensusItem] = []
    size_rows: list[tuple[int, int, int, int]] = []
    for idx, i_set in enumerate(antichains):
        try:
            result = build_containers(i_set, params)
        except (PreconditionError, ValueError) as exc:
            items.append(CensusItem(idx, False, (str(exc),), None))
            continue
        failures = check_invariants(i_set, params, result)
        sizes = (
            len(result.s1),
            len(result.s2),
            len(result.f_s1),
            len(result.g),
        )
        items.append(CensusItem(idx, not failures, failures, sizes))
        size_rows.append(sizes)

    aggregates: dict[str, tuple[int, float, int]] = {}
    if size_rows:
        for pos, name in enumerate(("s1", "s2", "f_s1", "g")):
            column = [row[pos] for row in size_rows]
            aggregates[name] = (min(column), float(median(column)), max(column))
    return CensusSummary(tuple(items), aggregates)
