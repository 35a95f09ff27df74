"""Experiment orchestration: M seeded runs, the seven summary criteria, and
the paired Wilcoxon signed-rank comparison.

Run k of an experiment uses seed base_seed + k; each run draws its own
train/test split from its own stream, so two algorithms given the same base
seed see identical splits and their per-run results pair exactly.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import BpsoParams, GaParams, bpso_run, ga_run
from .core import ConfigError, RunResult
from .data import Dataset, stratified_split
from .engine import FsroParams, run_search
from .fitness import FitnessEvaluator, FitnessParams
from .rng import RngStream

ALGORITHMS = ("fsro", "ga", "bpso")

# above this many nonzero differences the signed-rank p-value switches from
# exact enumeration to the tie-corrected normal approximation
EXACT_LIMIT = 20


@dataclass(frozen=True)
class ExperimentSummary:
    mean_fitness: float
    best_fitness: float
    worst_fitness: float
    std_fitness: float
    average_accuracy: float
    average_reduction: float
    average_time: float
    runs: int


class Decision(enum.Enum):
    NO_DIFFERENCE = "-"
    SIGNIFICANT = "+"


def _search(algorithm: str, algo_params, dim: int, evaluate, rng: RngStream):
    if algorithm == "fsro":
        return run_search(algo_params, dim, evaluate, rng)
    if algorithm == "ga":
        return ga_run(algo_params, dim, evaluate, rng)
    if algorithm == "bpso":
        return bpso_run(algo_params, dim, evaluate, rng)
    raise ConfigError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def default_params(algorithm: str, population_size: int = 40, max_iterations: int = 100):
    if algorithm == "fsro":
        return FsroParams(population_size=population_size, max_iterations=max_iterations)
    if algorithm == "ga":
        return GaParams(population_size=population_size, max_iterations=max_iterations)
    if algorithm == "bpso":
        return BpsoParams(population_size=population_size, max_iterations=max_iterations)
    raise ConfigError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_single(algorithm: str, dataset: Dataset, algo_params,
               fit_params: FitnessParams, seed: int) -> RunResult:
    """One seeded run: split, evaluate-loop, and dataset-level bookkeeping."""
    start = time.perf_counter()
    rng = RngStream(seed)
    split = stratified_split(dataset, fit_params.train_fraction, rng)
    evaluator = FitnessEvaluator(dataset, split, fit_params)
    outcome = _search(algorithm, algo_params, dataset.n_features, evaluator, rng)
    wall = time.perf_counter() - start
    return RunResult(
        algorithm=algorithm,
        dataset=dataset.name,
        seed=seed,
        best_fitness=outcome.best_fitness,
        best_mask=outcome.best_mask,
        test_accuracy=evaluator.accuracy(outcome.best_mask),
        selected_count=int(outcome.best_mask.sum()),
        wall_time_seconds=wall,
        trace=outcome.trace,
    )


def _run_job(args) -> RunResult:
    return run_single(*args)


def run_experiment(algorithm: str, dataset: Dataset, algo_params,
                   fit_params: FitnessParams, m_runs: int, base_seed: int,
                   workers: int = 1) -> tuple[list[RunResult], ExperimentSummary]:
    """M independent runs with seeds base_seed..base_seed+M-1, plus the summary."""
    if m_runs < 1:
        raise ConfigError(f"need at least one run, got {m_runs}")
    jobs = [(algorithm, dataset, algo_params, fit_params, base_seed + k)
            for k in range(m_runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    results.sort(key=lambda r: r.seed)
    return results, summarize(results, dataset.n_features)


def summarize_fitness(values: list[float]) -> tuple[float, float, float, float]:
    """(mean, best, worst, population std) of per-run best fitness values."""
    if not values:
        raise ValueError("cannot summarize an empty list of fitness values")
    arr = np.asarray(values, dtype=np.float64)
    return float(arr.mean()), float(arr.min()), float(arr.max()), float(arr.std())


def average_accuracy(results: list[RunResult]) -> float:
    return float(np.mean([r.test_accuracy for r in results]))


def average_reduction(results: list[RunResult], total_features: int) -> float:
    return float(np.mean([total_features - r.selected_count for r in results]))


def summarize(results: list[RunResult], total_features: int) -> ExperimentSummary:
    mean_f, best_f, worst_f, std_f = summarize_fitness([r.best_fitness for r in results])
    return ExperimentSummary(
        mean_fitness=mean_f,
        best_fitness=best_f,
        worst_fitness=worst_f,
        std_fitness=std_f,
        average_accuracy=average_accuracy(results),
        average_reduction=average_reduction(results, total_features),
        average_time=float(np.mean([r.wall_time_seconds for r in results])),
        runs=len(results),
    )


def _signed_ranks(diffs: list[float]) -> tuple[list[int], list[int]]:
    """Ranks of |d| (average ranks for ties) scaled by 2 so they stay integers.

    Returns (scaled ranks, tie-group sizes).
    """
    order = sorted(range(len(diffs)), key=lambda i: abs(diffs[i]))
    scaled = [0] * len(diffs)
    ties = []
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and abs(diffs[order[j]]) == abs(diffs[order[i]]):
            j += 1
        # average of ranks i+1..j, doubled: (i+1 + j)
        for k in range(i, j):
            scaled[order[k]] = i + 1 + j
        ties.append(j - i)
        i = j
    return scaled, ties


def _exact_p(scaled_ranks: list[int], w_scaled: int) -> float:
    """P(min(W+, W-) <= observed) over all equally likely sign assignments."""
    total = sum(scaled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in scaled_ranks:
        for w in range(total - r, -1, -1):
            if counts[w]:
                counts[w + r] += counts[w]
    hits = sum(c for w, c in enumerate(counts) if min(w, total - w) <= w_scaled)
    return hits / (1 << len(scaled_ranks))


def _normal_p(scaled_ranks: list[int], ties: list[int], w_scaled: int) -> float:
    m = len(scaled_ranks)
    w = w_scaled / 2.0
    mean = m * (m + 1) / 4.0
    var = m * (m + 1) * (2 * m + 1) / 24.0 - sum(t**3 - t for t in ties) / 48.0
    z = (w - mean + 0.5) / math.sqrt(var)
    return min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))


def wilcoxon_signed_rank(sample_a, sample_b, alpha: float = 0.05) -> tuple[float, Decision]:
    """Two-sided paired signed-rank test; zero differences are dropped.

    Exact enumeration p-value up to EXACT_LIMIT nonzero differences, a
    tie-corrected continuity-corrected normal approximation beyond.
    """
    a = list(sample_a)
    b = list(sample_b)
    if len(a) != len(b) or not a:
        raise ValueError(f"need equal-length non-empty samples, got {len(a)} and {len(b)}")
    diffs = [x - y for x, y in zip(a, b) if x != y]
    if not diffs:
        return 1.0, Decision.NO_DIFFERENCE
    scaled, ties = _signed_ranks(diffs)
    w_plus = sum(r for r, d in zip(scaled, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(scaled, diffs) if d < 0)
    w_scaled = min(w_plus, w_minus)
    if len(diffs) <= EXACT_LIMIT:
        p = _exact_p(scaled, w_scaled)
    else:
        p = _normal_p(scaled, ties, w_scaled)
    return p, (Decision.SIGNIFICANT if p < alpha else Decision.NO_DIFFERENCE)
