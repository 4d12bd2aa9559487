"""Log-space evaluation of the union-bound and Chernoff machinery.

At the lattice sizes where the probabilistic argument activates
(n around 10^16 and beyond), the quantity pmt = p * m * t is of order
e^(n ln 2) and the raw logs of the bound's factors overflow a double.
Every factor is therefore carried *per pmt*: its natural log divided by
pmt, computed from algebraically cancelled identities that never
subtract two astronomically large terms.  The budget each factor has to
beat is eps^2/400 in the same normalization, and the Chernoff factor
contributes exactly -eps^2/100.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import PreconditionError

__all__ = [
    "BoundReport",
    "chernoff_log_bound",
    "log_central_binom",
    "small_binom_sum_log",
    "union_bound_report",
]

_LN2 = math.log(2.0)
_EXACT_SUM_CAP = 10**6


def log_central_binom(n: float) -> float:
    """ln C(n, floor(n/2)).

    Exact via log-gamma up to n = 1000; beyond that a three-term
    Stirling series (truncation error below 1e-6 there), with odd n
    routed through the identity C(n, (n-1)/2) = C(n+1, (n+1)/2)/2 so
    the even-n series applies.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n <= 1000:
        k = int(n)
        return (
            math.lgamma(k + 1)
            - math.lgamma(k // 2 + 1)
            - math.lgamma(k - k // 2 + 1)
        )
    if float(n) != math.floor(n):
        raise ValueError(f"n must be integral, got {n}")
    # Parity is meaningless (and n+1 == n) once floats lose integer
    # resolution; the even-n series is within O(1/n) there anyway.
    if n < 2**52 and math.floor(n) % 2 == 1:
        return log_central_binom(n + 1) - _LN2
    return n * _LN2 - 0.5 * math.log(math.pi * n / 2.0) - 1.0 / (4.0 * n)


def chernoff_log_bound(mean: float, threshold: float) -> float:
    """Log of the multiplicative Chernoff tail exp(-d^2 mean / (2+d)).

    d is the relative overshoot threshold/mean - 1.  This form is
    stronger than exp(-eps^2 pmt/100) whenever mean <= (1+eps/4)pmt,
    threshold = (1+eps/2)pmt and eps <= 1; the dominance grid in the
    tests pins that down numerically.
    """
    if not mean > 0:
        raise PreconditionError(f"mean must be positive, got {mean}")
    if not threshold > mean:
        raise PreconditionError(
            f"threshold must exceed the mean, got {threshold} <= {mean}"
        )
    delta = threshold / mean - 1.0
    return -delta * delta * mean / (2.0 + delta)


def small_binom_sum_log(s: int, t_cap: int) -> float:
    """log of the number of subsets of an s-set with at most t_cap elements.

    Exact log-space summation up to s = 10^6; above that a closed-form
    upper bound (s ln 2 once t_cap reaches s/2, otherwise the largest
    term times the term count).
    """
    if s < 0 or t_cap < 0:
        raise ValueError(f"s and t_cap must be nonnegative, got {s}, {t_cap}")
    top = min(t_cap, s)
    if s <= _EXACT_SUM_CAP:
        ks = np.arange(top + 1, dtype=np.float64)
        terms = gammaln(s + 1.0) - gammaln(ks + 1.0) - gammaln(s - ks + 1.0)
        return float(logsumexp(terms))
    if top >= s / 2:
        return s * _LN2
    largest = (
        math.lgamma(s + 1.0) - math.lgamma(top + 1.0) - math.lgamma(s - top + 1.0)
    )
    return math.log(top + 1.0) + largest


@dataclass(frozen=True)
class BoundReport:
    """Per-pmt log accounting of the four-factor union bound.

    `log_factors_per_pmt` lists (prefactor, phase-1 selection, phase-2
    selection, Chernoff) logs divided by pmt; `margins` is the slack of
    the first three against their common eps^2/400 budget, each required
    to be a finite negative real for the bound to close.
    """

    n_exponent: int
    n: float
    t: int
    eps: float
    c_const: float
    p: float
    log_pmt: float
    log_factors_per_pmt: tuple[float, float, float, float]
    margins: tuple[float, float, float]
    chernoff_exponent_log: float
    total_log_pi_per_pmt: float

    @property
    def closes(self) -> bool:
        """True when all three margins and the total are negative."""
        return all(x < 0 for x in self.margins) and self.total_log_pi_per_pmt < 0


def _minimal_feasible_exponent(c_const: float, t: int) -> int:
    for k in range(1, 400):
        if c_const <= 10.0 ** (k * t):
            return k
    raise AssertionError("unreachable for any representable c_const")


def union_bound_report(n_exponent: int, t: int, eps: float) -> BoundReport:
    """Evaluate the union bound at n = 10^n_exponent, p = C/n^t.

    The four factors are the pool-size prefactor (a_max+1)(b_max+1),
    the phase-1 selection count C(2^n, a_max) p^a_max with
    a_max = 2^n / n^(t+0.9), the phase-2 selection count
    C((t+2)m, b_max) p^b_max with b_max = (t+2)m/(eps1^2 n^t) and
    eps1 = eps/4, and the Chernoff tail exp(-eps^2 pmt/100).  Binomials
    enter through log C(N,k) <= k (ln N - ln k + 1), which leaves only
    cancelled ratios:

        a_max/pmt = exp(ln(pi n/2)/2 + 1/(4n) - 0.9 ln n - ln C - ln t)
        b_max/pmt = 16 (t+2) / (eps^2 t C)            (n cancels)
        2^n p / a_max = C n^0.9,   (t+2)m p / b_max = eps1^2 C

    The prefactor's per-pmt log underflows to exactly 0.0 at every
    feasible n (its raw log is of order n while pmt is of order 2^n);
    that zero is reported as-is and its margin is then -eps^2/400.
    """
    if n_exponent < 1:
        raise ValueError(f"n_exponent must be positive, got {n_exponent}")
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")

    c_const = 1e10 * eps**-5.0
    ln_n = n_exponent * math.log(10.0)
    ln_c = math.log(1e10) - 5.0 * math.log(eps)
    if ln_c > t * ln_n:
        raise ValueError(
            f"p = C/n^t exceeds 1 at n = 10^{n_exponent} with C = {c_const:.4g}; "
            f"minimal feasible n_exponent for t={t}, eps={eps} is "
            f"{_minimal_feasible_exponent(c_const, t)}"
        )
    n = 10.0**n_exponent
    ln_p = ln_c - t * ln_n
    p = math.exp(ln_p)
    ln_m = log_central_binom(n)
    log_pmt = ln_p + ln_m + math.log(t)
    eps1 = eps / 4.0
    budget = eps * eps / 400.0

    # ln(2^n / m) known in closed form; never form the huge logs apart.
    ln_pool_ratio = 0.5 * math.log(math.pi * n / 2.0) + 1.0 / (4.0 * n)
    ln_r_a = ln_pool_ratio - 0.9 * ln_n - ln_c - math.log(t)
    r_b = 16.0 * (t + 2) / (eps * eps * t * c_const)

    f2 = math.exp(ln_r_a) * (ln_c + 0.9 * ln_n + 1.0)
    f3 = r_b * (2.0 * math.log(eps1) + ln_c + 1.0)

    ln_a_max = n * _LN2 - (t + 0.9) * ln_n
    ln_b_max = log_pmt + math.log(r_b)
    ln_f1_raw = ln_a_max + ln_b_max
    f1 = math.exp(math.log(ln_f1_raw) - log_pmt) if ln_f1_raw > 0 else 0.0

    chernoff = -eps * eps / 100.0
    factors = (f1, f2, f3, chernoff)
    margins = (f1 - budget, f2 - budget, f3 - budget)
    return BoundReport(
        n_exponent=n_exponent,
        n=n,
        t=t,
        eps=eps,
        c_const=c_const,
        p=p,
        log_pmt=log_pmt,
        log_factors_per_pmt=factors,
        margins=margins,
        chernoff_exponent_log=math.log(eps * eps / 100.0) + log_pmt,
        total_log_pi_per_pmt=sum(factors),
    )
