"""Seeded sampling of random subfamilies and desk-scale experiments.

Randomness is counter-based: each trial owns a Philox stream keyed on
(seed, trial), and a vertex's inclusion is decided by its position in
that stream.  Any single trial is therefore reproducible in isolation,
trials can run on any number of workers in any order, and for a fixed
trial the samples at increasing p are nested (common random numbers),
which stabilizes the threshold trend.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import FeasibilityError
from .lattice import VertexSet
from .solver import max_antichain_exact

__all__ = [
    "SampleConfig",
    "ThresholdExperimentRow",
    "expected_comparable_pairs",
    "feasible_point",
    "run_trial",
    "sample_power_set",
    "threshold_points",
    "threshold_experiment",
    "window_experiment_t",
    "window_points",
]

logger = logging.getLogger(__name__)

_MAX_SAMPLE_N = 24
_PAIR_BUDGET = 1e8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class SampleConfig:
    """Parameters of one P(n,p) sampling run."""

    n: int
    p: float
    seed: int
    trials: int

    def __post_init__(self) -> None:
        if not 0 <= self.n <= _MAX_SAMPLE_N:
            raise FeasibilityError(
                f"sampling supports 0 <= n <= {_MAX_SAMPLE_N}, got {self.n}"
            )
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")


@dataclass(frozen=True)
class ThresholdExperimentRow:
    """One solved trial; c holds c or p depending on the experiment mode."""

    c: float
    trial: int
    sample_size: int
    alpha: int
    ratio: float


def sample_power_set(config: SampleConfig, trial: int) -> VertexSet:
    """Include each vertex of P(n) independently with probability p."""
    if trial < 0:
        raise ValueError(f"trial index must be nonnegative, got {trial}")
    rng = np.random.Generator(np.random.Philox(key=[config.seed, trial]))
    total = 1 << config.n
    picked: list[np.ndarray] = []
    for start in range(0, total, _CHUNK):
        width = min(_CHUNK, total - start)
        hits = np.nonzero(rng.random(width) < config.p)[0]
        if hits.size:
            picked.append(hits + start)
    if not picked:
        return VertexSet(config.n, ())
    ids = np.concatenate(picked)
    return VertexSet(config.n, tuple(int(v) for v in ids))


def expected_comparable_pairs(n: int, p: float) -> float:
    """E[number of edges of G inside P(n,p)] = p^2 (3^n - 2^n)."""
    return p * p * float(3**n - 2**n)


def feasible_point(n: int, p: float) -> bool:
    """Whether a sampled point stays within the matching-solver budget."""
    return n <= _MAX_SAMPLE_N and expected_comparable_pairs(n, p) <= _PAIR_BUDGET


def run_trial(n: int, p: float, t: int, seed: int, trial: int) -> tuple[int, int, float]:
    """Sample one P(n,p), solve it exactly; (sample_size, alpha, ratio)."""
    sample = sample_power_set(SampleConfig(n=n, p=p, seed=seed, trials=1), trial)
    alpha = max_antichain_exact(sample).alpha
    denom = p * math.comb(n, n // 2) * t
    return len(sample), alpha, alpha / denom


def threshold_points(n: int, c_values: list[float]) -> list[tuple[float, float]]:
    """Validated, feasibility-filtered (c, p) points; skips are logged."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    points: list[tuple[float, float]] = []
    for c in c_values:
        if c <= 0:
            raise ValueError(f"c values must be positive, got {c}")
        if c > n:
            logger.warning("skipping c=%.6g at n=%d: p = c/n exceeds 1", c, n)
            continue
        _keep_if_feasible(n, c, c / n, points)
    return points


def window_points(n: int, t: int, p: float) -> list[tuple[float, float]]:
    """Validated, feasibility-filtered single point for the window mode."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    points: list[tuple[float, float]] = []
    _keep_if_feasible(n, p, p, points)
    return points


def _keep_if_feasible(
    n: int, label: float, p: float, out: list[tuple[float, float]]
) -> None:
    if feasible_point(n, p):
        out.append((label, p))
    else:
        logger.warning(
            "skipping experiment point n=%d, p=%.6g: expected comparable "
            "pairs %.3g exceed the %.0g budget",
            n,
            p,
            expected_comparable_pairs(n, p),
            _PAIR_BUDGET,
        )


def _experiment(
    n: int,
    points: list[tuple[float, float]],
    t: int,
    trials: int,
    seed: int,
) -> list[ThresholdExperimentRow]:
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    rows: list[ThresholdExperimentRow] = []
    for label, p in points:
        for trial in range(trials):
            size, alpha, ratio = run_trial(n, p, t, seed, trial)
            rows.append(
                ThresholdExperimentRow(
                    c=label, trial=trial, sample_size=size, alpha=alpha, ratio=ratio
                )
            )
    return rows


def threshold_experiment(
    n: int, c_values: list[float], trials: int, seed: int
) -> list[ThresholdExperimentRow]:
    """Solve trials of P(n, c/n) per c; ratio is alpha / (p m).

    Infeasible points (p > 1, or expected comparable pairs beyond the
    solver budget) are skipped with a logged reason rather than failing
    the run.
    """
    return _experiment(n, threshold_points(n, c_values), 1, trials, seed)


def window_experiment_t(
    n: int, t: int, p: float, trials: int, seed: int
) -> list[ThresholdExperimentRow]:
    """Same harness at a directly chosen p; ratio is alpha / (p m t)."""
    return _experiment(n, window_points(n, t, p), t, trials, seed)
