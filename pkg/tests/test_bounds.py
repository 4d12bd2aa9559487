"""Chernoff and union-bound arithmetic tests.

The oracles here are hand algebra: the Chernoff form at the standard
test point (mean (1+e/4)M, threshold (1+e/2)M) collapses to
-e^2 M / (4(8+3e)), and the phase-2 factor of the union bound is
16(t+2)/(e^2 t C) times (2 ln(e/4) + ln C + 1), both derivable without
running the code.
"""

from __future__ import annotations

import math

import pytest

from spernerlab.bounds import (
    BoundReport,
    chernoff_log_bound,
    log_central_binom,
    small_binom_sum_log,
    union_bound_report,
)
from spernerlab.errors import PreconditionError


class TestChernoff:
    def test_doubling_point(self):
        # delta = 1: exponent -1 * 100 / 3.
        assert chernoff_log_bound(100, 200) == pytest.approx(-100 / 3, rel=1e-12)

    def test_beats_flat_exponent_near_mean(self):
        got = chernoff_log_bound(1025.0, 1050.0)
        assert got <= -0.1

    @pytest.mark.parametrize("eps", [0.05, 0.1, 0.25, 0.5, 1.0])
    @pytest.mark.parametrize("pmt", [1e2, 1e4, 1e6])
    def test_dominance_grid(self, eps, pmt):
        got = chernoff_log_bound((1 + eps / 4) * pmt, (1 + eps / 2) * pmt)
        assert got <= -eps * eps * pmt / 100

    @pytest.mark.parametrize("eps", [0.05, 0.1, 0.25, 0.5, 1.0])
    @pytest.mark.parametrize("pmt", [1e2, 1e4, 1e6])
    def test_closed_form(self, eps, pmt):
        # Hand algebra: delta = eps/(4+eps), exponent -eps^2 M/(4(8+3eps)).
        got = chernoff_log_bound((1 + eps / 4) * pmt, (1 + eps / 2) * pmt)
        assert got == pytest.approx(-eps * eps * pmt / (4 * (8 + 3 * eps)), rel=1e-10)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            chernoff_log_bound(100, 100)
        with pytest.raises(PreconditionError):
            chernoff_log_bound(0, 1)
        with pytest.raises(PreconditionError):
            chernoff_log_bound(-5, 1)


class TestLogCentralBinom:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 10, 11, 100, 999, 1000])
    def test_exact_range(self, n):
        assert log_central_binom(n) == pytest.approx(
            math.log(math.comb(n, n // 2)), rel=1e-12, abs=1e-12
        )

    @pytest.mark.parametrize("n", [1002, 2000, 5000])
    def test_series_even(self, n):
        assert log_central_binom(n) == pytest.approx(
            math.log(math.comb(n, n // 2)), abs=1e-8
        )

    @pytest.mark.parametrize("n", [1001, 2001])
    def test_series_odd(self, n):
        assert log_central_binom(n) == pytest.approx(
            math.log(math.comb(n, n // 2)), abs=1e-8
        )

    def test_huge_n_magnitude(self):
        # Leading term n ln 2 dominates; sanity band only.
        got = log_central_binom(1e16)
        assert got == pytest.approx(1e16 * math.log(2), rel=1e-12)

    def test_rejects_negative_and_fractional(self):
        with pytest.raises(ValueError):
            log_central_binom(-1)
        with pytest.raises(ValueError):
            log_central_binom(1500.5)


class TestSmallBinomSum:
    def test_full_power_set(self):
        assert small_binom_sum_log(5, 5) == pytest.approx(math.log(32), rel=1e-12)

    def test_singletons(self):
        assert small_binom_sum_log(10, 1) == pytest.approx(math.log(11), rel=1e-12)

    def test_up_to_triples(self):
        expected = math.log(1 + 100 + 4950 + 161700)
        assert small_binom_sum_log(100, 3) == pytest.approx(expected, rel=1e-12)

    def test_cap_beyond_s(self):
        assert small_binom_sum_log(10, 15) == pytest.approx(math.log(1024), rel=1e-12)

    def test_degenerate(self):
        assert small_binom_sum_log(0, 0) == pytest.approx(0.0, abs=1e-12)

    def test_large_s_half_regime(self):
        s = 2 * 10**6
        assert small_binom_sum_log(s, s // 2) == pytest.approx(s * math.log(2), rel=1e-12)

    def test_large_s_bound_brackets_exact(self):
        s, cap = 2 * 10**6, 3
        exact = math.log(sum(math.comb(s, k) for k in range(cap + 1)))
        got = small_binom_sum_log(s, cap)
        assert exact <= got <= exact + math.log(cap + 1) + 0.1

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            small_binom_sum_log(-1, 0)
        with pytest.raises(ValueError):
            small_binom_sum_log(5, -1)


class TestUnionBoundReport:
    @pytest.mark.parametrize(
        "t,eps,n_exp", [(1, 0.1, 16), (1, 0.05, 22), (2, 0.1, 16), (1, 0.1, 18)]
    )
    def test_bound_closes(self, t, eps, n_exp):
        report = union_bound_report(n_exp, t, eps)
        assert isinstance(report, BoundReport)
        assert report.closes
        assert all(m < 0 for m in report.margins)
        assert report.total_log_pi_per_pmt < 0
        assert all(math.isfinite(m) for m in report.margins)

    def test_constant_substitution(self):
        report = union_bound_report(16, 1, 0.1)
        assert report.c_const == pytest.approx(1e15, rel=1e-12)
        assert report.p == pytest.approx(0.1, rel=1e-12)

    def test_phase2_factor_hand_value(self):
        # r_b = 16*3/(0.01*1e15) = 4.8e-12 exactly; times
        # 2 ln(0.025) + ln(1e15) + 1 = 28.16102 gives 1.3517e-10.
        report = union_bound_report(16, 1, 0.1)
        assert report.log_factors_per_pmt[2] == pytest.approx(1.3517e-10, rel=1e-3)

    def test_prefactor_underflows_to_zero(self):
        report = union_bound_report(16, 1, 0.1)
        assert report.log_factors_per_pmt[0] == 0.0
        assert report.margins[0] == pytest.approx(-0.1**2 / 400, rel=1e-12)

    def test_chernoff_factor_is_flat_exponent(self):
        report = union_bound_report(16, 2, 0.1)
        assert report.log_factors_per_pmt[3] == pytest.approx(-1e-4, rel=1e-12)
        assert math.isfinite(report.chernoff_exponent_log)

    @pytest.mark.parametrize("t", [1, 2])
    @pytest.mark.parametrize("eps", [0.05, 0.1])
    def test_feasible_grid_closes(self, t, eps):
        # Smallest workable exponent and a comfortably larger one.
        for bump in (0, 4):
            k = math.ceil((10 + 5 * math.log10(1 / eps)) / t) + bump
            assert union_bound_report(k, t, eps).closes

    def test_infeasible_names_minimal_exponent(self):
        with pytest.raises(ValueError, match="15"):
            union_bound_report(14, 1, 0.1)
        with pytest.raises(ValueError, match="8"):
            union_bound_report(7, 2, 0.1)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            union_bound_report(0, 1, 0.1)
        with pytest.raises(ValueError):
            union_bound_report(16, 0, 0.1)
        with pytest.raises(ValueError):
            union_bound_report(16, 1, 0.0)
        with pytest.raises(ValueError):
            union_bound_report(16, 1, 1.5)
