"""Two-phase container process: reference cross-checks and postconditions."""

import numpy as np
import pytest

from conftest import random_maximal_antichain
from spernerlab.containers import (
    CensusSummary,
    ContainerParams,
    ContainerResult,
    build_containers,
    check_invariants,
    container_census,
    verify_idempotence,
)
from spernerlab.errors import FeasibilityError, PreconditionError
from spernerlab.lattice import VertexSet, layer_vertex_set


def _reference_run(i_set: VertexSet, params: ContainerParams):
    """Plain-set reimplementation: full degree rescan at every step."""
    n = params.n
    size = 1 << n
    rank = {int(v): r for r, v in enumerate(params.vertex_of_rank())}
    alive = set(range(size))
    members = i_set.member_set

    def neighbors(v):
        return {
            w for w in alive if w != v and (v & w) in (v, w)
        }

    s1, s2 = [], []
    f = None
    g = None
    trace = []
    phase = 1
    while alive:
        deg = {v: len(neighbors(v)) for v in alive}
        u = max(alive, key=lambda v: (deg[v], -rank[v]))
        d = deg[u]
        if u not in members:
            branch = "nonmember"
            alive.remove(u)
        else:
            theta = params.theta1 if phase == 1 else params.theta2
            if d >= theta:
                branch = "heavy"
                closed = neighbors(u) | {u}
                alive -= closed
            else:
                branch = "light"
                alive.remove(u)
            (s1 if phase == 1 else s2).append(u)
        trace.append((phase, u, d, branch))
        if branch == "light":
            if phase == 1:
                f = frozenset(alive)
                phase = 2
            else:
                g = frozenset(alive)
                break
    return (
        sorted(s1),
        sorted(s2),
        frozenset() if f is None else f,
        frozenset() if g is None else g,
        trace,
    )


def _assert_matches_reference(i_set: VertexSet, params: ContainerParams):
    result = build_containers(i_set, params, want_trace=True)
    ref_s1, ref_s2, ref_f, ref_g, ref_trace = _reference_run(i_set, params)
    assert list(result.s1.members) == ref_s1
    assert list(result.s2.members) == ref_s2
    assert result.f_s1.member_set == ref_f
    assert result.g.member_set == ref_g
    got_trace = [(st.phase, st.vertex, st.degree, st.branch) for st in result.trace]
    assert got_trace == ref_trace


# ---------------------------------------------------------------------------
# Frozen small examples
# ---------------------------------------------------------------------------


def test_two_singletons_n2():
    params = ContainerParams(2, 1, 0.25)
    result = build_containers(VertexSet(2, (1, 2)), params, want_trace=True)
    assert result.s1.members == (1,)
    assert result.s2.members == (2,)
    assert result.f_s1.members == (2,)
    assert result.g.members == ()
    steps = [(st.step, st.phase, st.vertex, st.degree, st.branch) for st in result.trace]
    assert steps == [
        (1, 1, 0, 3, "nonmember"),
        (2, 1, 3, 2, "nonmember"),
        (3, 1, 1, 0, "light"),
        (4, 2, 2, 0, "light"),
    ]


def test_empty_antichain_all_deletions():
    params = ContainerParams(3, 1, 0.2)
    result = build_containers(VertexSet(3, ()), params, want_trace=True)
    assert result.s1.members == ()
    assert result.s2.members == ()
    assert result.f_s1.members == ()
    assert result.g.members == ()
    assert all(st.branch == "nonmember" for st in result.trace)
    assert len(result.trace) == 8


def test_no_trace_by_default():
    result = build_containers(VertexSet(3, (1,)), ContainerParams(3, 1, 0.2))
    assert result.trace is None


# ---------------------------------------------------------------------------
# Reference cross-validation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("tie", ["bitmask", "centrality"])
def test_matches_reference_on_random_antichains(tie):
    rng = np.random.default_rng(4242)
    for n in (3, 4, 5, 6):
        params = ContainerParams(n, 1, 0.2, tie_order=tie)
        for _ in range(8):
            i_set = random_maximal_antichain(n, rng)
            _assert_matches_reference(i_set, params)


def test_matches_reference_on_layers_and_slices():
    rng = np.random.default_rng(99)
    for n in (4, 5, 6):
        params = ContainerParams(n, 1, 0.25)
        full = layer_vertex_set(n, n // 2)
        _assert_matches_reference(full, params)
        ids = [v for v in full.members if rng.random() < 0.5]
        _assert_matches_reference(VertexSet.from_ids(n, ids), params)


def test_explicit_identity_permutation_equals_bitmask():
    i_set = layer_vertex_set(5, 2)
    base = build_containers(i_set, ContainerParams(5, 1, 0.2))
    perm = tuple(range(32))
    explicit = build_containers(i_set, ContainerParams(5, 1, 0.2, tie_order=perm))
    assert base == explicit


def test_tie_order_changes_selection():
    # Reversing the order flips which of two symmetric vertices goes first.
    i_set = VertexSet(2, (1, 2))
    reversed_perm = tuple(range(3, -1, -1))
    result = build_containers(
        i_set, ContainerParams(2, 1, 0.25, tie_order=reversed_perm)
    )
    assert result.s1.members == (2,)
    assert result.s2.members == (1,)


# ---------------------------------------------------------------------------
# Postconditions and idempotence
# ---------------------------------------------------------------------------


def test_middle_layer_invariants_n10_n12():
    for n in (10, 12):
        i_set = layer_vertex_set(n, n // 2)
        params = ContainerParams(n, 1, 0.2)
        result = build_containers(i_set, params)
        assert check_invariants(i_set, params, result) == ()
        assert verify_idempotence(i_set, params, first=result)


def test_single_middle_vertex_idempotent_n10():
    i_set = VertexSet.from_ids(10, [0b11111_00000])
    assert verify_idempotence(i_set, ContainerParams(10, 1, 0.2))


def test_idempotence_on_random_maximal_antichains():
    rng = np.random.default_rng(515)
    for n in (6, 8, 10):
        params = ContainerParams(n, 1, 0.2)
        for _ in range(5):
            assert verify_idempotence(random_maximal_antichain(n, rng), params)


def test_build_is_deterministic():
    rng = np.random.default_rng(3)
    i_set = random_maximal_antichain(9, rng)
    params = ContainerParams(9, 1, 0.1)
    assert build_containers(i_set, params, True) == build_containers(
        i_set, params, True
    )


def test_structural_invariants_random_n10():
    rng = np.random.default_rng(77)
    params = ContainerParams(10, 1, 0.2)
    for _ in range(10):
        i_set = random_maximal_antichain(10, rng)
        result = build_containers(i_set, params)
        failures = check_invariants(i_set, params, result)
        # The f-size bullet needs asymptotically large n and is allowed to
        # fail here; everything else must hold at every scale.
        assert all("f(s1)" in msg for msg in failures)
        assert result.g.member_set <= result.f_s1.member_set


# ---------------------------------------------------------------------------
# Parameter validation and error paths
# ---------------------------------------------------------------------------


def test_eps_range_depends_on_t():
    ContainerParams(8, 1, 0.25)
    with pytest.raises(ValueError):
        ContainerParams(8, 1, 0.26)
    with pytest.raises(ValueError):
        ContainerParams(8, 2, 0.03)
    loose = ContainerParams(8, 2, 0.03, allow_loose_eps=True)
    assert loose.theta2 == pytest.approx(0.03**2 * 64)
    with pytest.raises(ValueError):
        ContainerParams(8, 2, 0.0, allow_loose_eps=True)


def test_bad_params_rejected():
    with pytest.raises(ValueError):
        ContainerParams(8, 0, 0.1)
    with pytest.raises(FeasibilityError):
        ContainerParams(23, 1, 0.2)
    with pytest.raises(ValueError):
        ContainerParams(3, 1, 0.2, tie_order=(0, 1, 2, 2, 4, 5, 6, 7))
    with pytest.raises(ValueError):
        ContainerParams(3, 1, 0.2, tie_order="zigzag")


def test_non_antichain_rejected():
    with pytest.raises(PreconditionError):
        build_containers(VertexSet(3, (1, 3)), ContainerParams(3, 1, 0.2))


def test_n_mismatch_rejected():
    with pytest.raises(ValueError):
        build_containers(VertexSet(4, (1, 2)), ContainerParams(3, 1, 0.2))


# ---------------------------------------------------------------------------
# Batch census
# ---------------------------------------------------------------------------


def test_census_flags_chain_without_aborting():
    params = ContainerParams(6, 1, 0.2)
    batch = [
        VertexSet(6, (0, 1)),  # a chain, not an antichain
        layer_vertex_set(6, 3),
    ]
    summary = container_census(batch, params)
    assert len(summary.items) == 2
    assert not summary.items[0].ok
    assert summary.items[0].sizes is None
    assert "antichain" in summary.items[0].failures[0]
    assert summary.items[1].ok
    assert not summary.all_ok
    assert set(summary.aggregates) == {"s1", "s2", "f_s1", "g"}
    lo, mid, hi = summary.aggregates["s1"]
    assert lo <= mid <= hi


def test_census_empty_batch():
    summary = container_census([], ContainerParams(5, 1, 0.2))
    assert summary == CensusSummary((), {})
    assert summary.all_ok


def test_census_random_batch_aggregates():
    rng = np.random.default_rng(8)
    batch = [random_maximal_antichain(8, rng) for _ in range(10)]
    summary = container_census(batch, ContainerParams(8, 1, 0.2))
    assert len(summary.items) == 10
    # The f-size bullet may fail at small n; nothing else is tolerated.
    for item in summary.items:
        assert item.sizes is not None
        assert all("f(s1)" in msg for msg in item.failures)
    sizes = [item.sizes for item in summary.items]
    for pos, name in enumerate(("s1", "s2", "f_s1", "g")):
        lo, mid, hi = summary.aggregates[name]
        assert lo == min(row[pos] for row in sizes)
        assert hi == max(row[pos] for row in sizes)
        assert lo <= mid <= hi
