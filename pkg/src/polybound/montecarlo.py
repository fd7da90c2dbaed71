"""Seeded empirical tail estimation.

Draws are grouped in fixed-size blocks; block ``b`` is sampled from a Philox
stream keyed by ``(seed, b)``.  Hit counts are integer sums over blocks, so
results do not depend on how many workers process them.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .bounds import BoundConstants, TailBoundReport, evaluate_bounds
from .distributions import Distribution
from .model import MultilinearPolynomial, evaluate_batch
from .moments import exact_mean
from .smoothness import profile as build_profile

__all__ = [
    "BLOCK_SIZE",
    "TailEstimate",
    "stream",
    "wilson_interval",
    "count_hits",
    "empirical_tail",
    "compare",
]

BLOCK_SIZE = 1 << 16
DEFAULT_SEED = 20240601


def stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for stream ``index`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


@dataclass(frozen=True)
class TailEstimate:
    lam: float
    samples: int
    hits: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(hits: int, samples: int, level: float = 0.99) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if samples < 1 or not 0 <= hits <= samples:
        raise ValueError(f"need 0 <= hits <= samples and samples >= 1, got {hits}/{samples}")
    z = float(norm.ppf(0.5 + level / 2))
    n = samples
    p = hits / n
    z2 = z * z
    denom = 1 + z2 / n
    mid = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    low = 0.0 if hits == 0 else max(0.0, min(p, mid - half))
    high = 1.0 if hits == samples else min(1.0, max(p, mid + half))
    return low, high


def _block_hits(args) -> np.ndarray:
    poly, dists, center, lams, seed, block, size = args
    rng = stream(seed, block)
    X = np.empty((size, poly.n))
    for v, d in enumerate(dists):
        X[:, v] = d.sample_array(rng, size)
    dev = np.sort(np.abs(evaluate_batch(poly, X) - center))
    # number of draws with dev >= lam
    return size - np.searchsorted(dev, lams, side="left")


def count_hits(
    poly: MultilinearPolynomial,
    dists: Sequence[Distribution],
    lams: Sequence[float],
    samples: int,
    seed: int,
    center: float | None = None,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> np.ndarray:
    """Exceedance counts of ``|f(Y) - center| >= lam`` for each ``lam``."""
    lams = np.asarray(lams, dtype=float)
    if center is None:
        center = float(exact_mean(poly, dists))
    tasks = []
    for b, start in enumerate(range(0, samples, block_size)):
        tasks.append((poly, list(dists), center, lams, seed, b, min(block_size, samples - start)))
    total = np.zeros(lams.shape, dtype=np.int64)
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            total += _block_hits(t)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for hits in pool.map(_block_hits, tasks):
                total += hits
    return total


def empirical_tail(
    poly: MultilinearPolynomial,
    dists: Sequence[Distribution],
    lambdas: Sequence[float],
    samples: int,
    seed: int = DEFAULT_SEED,
    level: float = 0.99,
    workers: int = 1,
) -> list[TailEstimate]:
    """Estimate ``Pr[|f(Y) - E f(Y)| >= lam]`` for every ``lam`` from one set of draws."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    hits = count_hits(poly, dists, lambdas, samples, seed, workers=workers)
    out = []
    for lam, h in zip(lambdas, hits):
        h = int(h)
        low, high = wilson_interval(h, samples, level)
        out.append(TailEstimate(float(lam), samples, h, h / samples, low, high, seed))
    return out


def default_workers() -> int:
    return os.cpu_count() or 1


def compare(
    poly: MultilinearPolynomial,
    dists: Sequence[Distribution],
    lambdas: Sequence[float],
    constants: BoundConstants,
    samples: int,
    seed: int = DEFAULT_SEED,
    level: float = 0.99,
    workers: int = 1,
    profile=None,
) -> list[TailBoundReport]:
    """Bound table joined with empirical estimates.

    A row is flagged when the lower confidence limit exceeds the clamped
    variance-based bound.  ``samples=0`` skips the simulation.
    """
    prof = profile if profile is not None else build_profile(poly, dists)
    lams = sorted(float(x) for x in lambdas)
    rows = [evaluate_bounds(lam, prof, constants) for lam in lams]
    if samples > 0:
        estimates = empirical_tail(poly, dists, lams, samples, seed, level, workers)
        for row, est in zip(rows, estimates):
            row.empirical = est
            row.violation = est.ci_low > row.main_bound
    return rows
