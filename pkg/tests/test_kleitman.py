"""Edge-minimality oracle and the density lower bound.

The frozen minima here were recomputed in-test by exhaustive enumeration
(itertools.combinations over all r-subsets) before being asserted against
the segment-based fast path.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from spernerlab.errors import FeasibilityError, PreconditionError
from spernerlab.kleitman import (
    DensityBoundParams,
    density_lower_bound,
    kleitman_min_edges,
    verify_kleitman_exhaustive,
    verify_kleitman_randomized,
    _edge_table,
)
from spernerlab.lattice import VertexSet, comparable, induced_edges


def _oracle_min_edges(n: int, r: int) -> int:
    best = None
    for ids in combinations(range(1 << n), r):
        e = sum(1 for i, a in enumerate(ids) for b in ids[i + 1 :] if comparable(a, b))
        best = e if best is None else min(best, e)
    return best


class TestMinEdges:
    def test_frozen_examples(self):
        assert kleitman_min_edges(3, 3) == 0
        # Oracle over all C(8,4)=70 subsets: minimum is 2.
        assert _oracle_min_edges(3, 4) == 2
        assert kleitman_min_edges(3, 4) == 2
        assert kleitman_min_edges(2, 4) == 5

    def test_matches_oracle_n3_all_r(self):
        for r in range(9):
            assert kleitman_min_edges(3, r) == _oracle_min_edges(3, r)

    def test_nondecreasing_in_r(self):
        for n in range(1, 6):
            values = [kleitman_min_edges(n, r) for r in range((1 << n) + 1)]
            assert values == sorted(values)

    def test_range_error(self):
        with pytest.raises(ValueError):
            kleitman_min_edges(3, 9)
        with pytest.raises(ValueError):
            kleitman_min_edges(3, -1)


class TestExhaustiveVerifier:
    def test_tiny_n_all_r(self):
        for n in (2, 3):
            for r in range((1 << n) + 1):
                assert verify_kleitman_exhaustive(n, r)

    def test_n4_all_r(self):
        for r in range(17):
            assert verify_kleitman_exhaustive(4, r)

    def test_refuses_n5(self):
        with pytest.raises(FeasibilityError):
            verify_kleitman_exhaustive(5, 10)

    def test_edge_table_against_direct_count(self):
        sizes, edges = _edge_table(3)
        rng = np.random.default_rng(3)
        for mask in rng.integers(0, 1 << 8, size=50):
            ids = [i for i in range(8) if (int(mask) >> i) & 1]
            vs = VertexSet.from_ids(3, ids)
            assert sizes[mask] == len(ids)
            assert edges[mask] == induced_edges(vs)


class TestRandomizedVerifier:
    def test_spot_checks_n5(self):
        for r in (2, 7, 16, 20, 27, 31, 32):
            assert verify_kleitman_randomized(5, r, samples=2000, seed=1)

    def test_trivial_r(self):
        assert verify_kleitman_randomized(5, 0, samples=10, seed=0)
        assert verify_kleitman_randomized(5, 32, samples=10, seed=0)

    def test_deterministic_in_seed(self):
        a = verify_kleitman_randomized(6, 30, samples=500, seed=42)
        b = verify_kleitman_randomized(6, 30, samples=500, seed=42)
        assert a == b is True

    def test_refuses_large_n(self):
        with pytest.raises(FeasibilityError):
            verify_kleitman_randomized(11, 5, samples=10, seed=0)


class TestDensityBound:
    def test_formula_values(self):
        assert density_lower_bound(DensityBoundParams(1, 0.125, 10), 300) == pytest.approx(93.75)
        assert density_lower_bound(DensityBoundParams(1, 0.5, 4), 12) == pytest.approx(6.0)
        # t=2: denominator (2t)^(t+1) = 64.
        assert density_lower_bound(DensityBoundParams(2, 0.25, 8), 160) == pytest.approx(40.0)

    def test_two_middle_layers_below_threshold(self):
        # 2*C(8,4) = 140 sits below (2 + 0.25)*70, so the hypothesis fails.
        with pytest.raises(PreconditionError):
            density_lower_bound(DensityBoundParams(2, 0.25, 8), 140)

    def test_every_12_subset_of_p4_beats_bound(self):
        bound = density_lower_bound(DensityBoundParams(1, 0.5, 4), 12)
        sizes, edges = _edge_table(4)
        worst = int(edges[sizes == 12].min())
        assert worst > bound

    def test_exhaustive_bound_check_n3(self):
        sizes, edges = _edge_table(3)
        for t in (1, 2):
            for eps in (0.25, 0.5):
                params = DensityBoundParams(t, eps, 3)
                for r in range(9):
                    if r < params.size_threshold:
                        continue
                    bound = density_lower_bound(params, r)
                    assert int(edges[sizes == r].min()) > bound

    def test_random_bound_check_mid_n(self):
        rng = np.random.default_rng(5)
        for n in (5, 6, 7, 8):
            for t, eps in ((1, 0.25), (1, 0.5), (2, 0.25)):
                params = DensityBoundParams(t, eps, n)
                lo = int(np.ceil(params.size_threshold))
                if lo > (1 << n):
                    continue
                for _ in range(200):
                    r = int(rng.integers(lo, (1 << n) + 1))
                    ids = rng.choice(1 << n, size=r, replace=False)
                    u = VertexSet.from_ids(n, ids)
                    assert induced_edges(u) > density_lower_bound(params, r)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            density_lower_bound(DensityBoundParams(1, 0.25, 6), 10)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            DensityBoundParams(0, 0.25, 5)
        with pytest.raises(ValueError):
            DensityBoundParams(1, 0.6, 5)
        with pytest.raises(ValueError):
            DensityBoundParams(1, 0.0, 5)
