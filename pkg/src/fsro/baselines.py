"""Reference binary optimizers sharing the frog-snake fitness interface.

Both are elitist, use the same zero-mask repair, and consume one RngStream in
a fixed order, so their runs replay exactly like the main engine's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, SearchOutcome, TraceRow
from .engine import repair_mask
from .rng import RngStream


@dataclass(frozen=True)
class GaParams:
    crossover_rate: float = 0.8
    mutation_rate: float = 0.3
    population_size: int = 40
    max_iterations: int = 100

    def __post_init__(self):
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigError(f"crossover_rate must be in [0,1], got {self.crossover_rate}")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError(f"mutation_rate must be in [0,1], got {self.mutation_rate}")
        if self.population_size < 2:
            raise ConfigError(f"population_size must be >= 2, got {self.population_size}")
        if self.max_iterations < 0:
            raise ConfigError(f"max_iterations must be >= 0, got {self.max_iterations}")


@dataclass(frozen=True)
class BpsoParams:
    inertia_weight: float = 1.0
    cognitive_factor: float = 2.0
    social_factor: float = 2.0
    velocity_clamp: float = 6.0
    population_size: int = 40
    max_iterations: int = 100

    def __post_init__(self):
        if self.velocity_clamp <= 0:
            raise ConfigError(f"velocity_clamp must be positive, got {self.velocity_clamp}")
        if self.population_size < 1:
            raise ConfigError(f"population_size must be >= 1, got {self.population_size}")
        if self.max_iterations < 0:
            raise ConfigError(f"max_iterations must be >= 0, got {self.max_iterations}")


def sigmoid_transfer(v: float) -> float:
    """Map a velocity to a bit-selection probability in (0, 1)."""
    return 1.0 / (1.0 + math.exp(-v))


def _random_mask(dim: int, rng: RngStream) -> np.ndarray:
    bits = np.empty(dim, dtype=np.uint8)
    for d in range(dim):
        bits[d] = rng.bit()
    return repair_mask(bits, rng)


def _tournament(fitness: list[float], rng: RngStream) -> int:
    """Binary tournament without replacement; the first pick wins ties."""
    i = rng.index(len(fitness))
    j = rng.index(len(fitness) - 1)
    if j >= i:
        j += 1
    return j if fitness[j] < fitness[i] else i


def ga_step(population: list[np.ndarray], fitness: list[float], params: GaParams,
            evaluate, rng: RngStream) -> tuple[list[np.ndarray], list[float]]:
    """One elitist generation: tournament parents, one-point crossover at the
    crossover rate, then one random bit flip per offspring at the mutation rate."""
    n = len(population)
    dim = population[0].size
    elite = min(range(n), key=lambda i: (fitness[i], i))
    new_pop = [population[elite].copy()]
    new_fit = [fitness[elite]]
    while len(new_pop) < n:
        p1 = population[_tournament(fitness, rng)]
        p2 = population[_tournament(fitness, rng)]
        if rng.uniform() < params.crossover_rate and dim >= 2:
            point = 1 + rng.index(dim - 1)
            c1 = np.concatenate([p1[:point], p2[point:]])
            c2 = np.concatenate([p2[:point], p1[point:]])
        else:
            c1, c2 = p1.copy(), p2.copy()
        for child in (c1, c2):
            if len(new_pop) >= n:
                break
            if rng.uniform() < params.mutation_rate:
                child[rng.index(dim)] ^= 1
            repair_mask(child, rng)
            new_pop.append(child)
            new_fit.append(evaluate(child))
    return new_pop, new_fit


def ga_run(params: GaParams, dim: int, evaluate, rng: RngStream) -> SearchOutcome:
    population = [_random_mask(dim, rng) for _ in range(params.population_size)]
    fitness = [evaluate(x) for x in population]
    best = min(range(len(fitness)), key=lambda i: (fitness[i], i))
    best_mask, best_fit = population[best].copy(), fitness[best]
    trace = [TraceRow(0, best_fit, 0, 0, False)]
    for t in range(params.max_iterations):
        population, fitness = ga_step(population, fitness, params, evaluate, rng)
        gen_best = min(range(len(fitness)), key=lambda i: (fitness[i], i))
        if fitness[gen_best] < best_fit:
            best_fit = fitness[gen_best]
            best_mask = population[gen_best].copy()
        trace.append(TraceRow(t + 1, best_fit, 0, 0, False))
    return SearchOutcome(best_mask=best_mask, best_fitness=best_fit, trace=trace)


def bpso_step(positions: list[np.ndarray], velocities: list[np.ndarray],
              pbest: list[np.ndarray], pbest_fit: list[float],
              gbest: np.ndarray, gbest_fit: float,
              params: BpsoParams, evaluate, rng: RngStream):
    """One synchronous swarm sweep: velocities first, then sigmoid resampling.

    Per particle and per dimension the draw order is the cognitive uniform,
    the social uniform, then one sampling uniform per dimension.
    """
    w, c1, c2 = params.inertia_weight, params.cognitive_factor, params.social_factor
    clamp = params.velocity_clamp
    dim = gbest.size
    for i, x in enumerate(positions):
        v = velocities[i]
        for d in range(dim):
            r1 = rng.uniform()
            r2 = rng.uniform()
            vd = (w * v[d]
                  + c1 * r1 * (float(pbest[i][d]) - float(x[d]))
                  + c2 * r2 * (float(gbest[d]) - float(x[d])))
            v[d] = min(max(vd, -clamp), clamp)
        for d in range(dim):
            x[d] = 1 if rng.uniform() < sigmoid_transfer(v[d]) else 0
        repair_mask(x, rng)
        fit = evaluate(x)
        if fit < pbest_fit[i]:
            pbest_fit[i] = fit
            pbest[i] = x.copy()
    gen_best = min(range(len(pbest_fit)), key=lambda i: (pbest_fit[i], i))
    if pbest_fit[gen_best] < gbest_fit:
        gbest_fit = pbest_fit[gen_best]
        gbest = pbest[gen_best].copy()
    return gbest, gbest_fit


def bpso_run(params: BpsoParams, dim: int, evaluate, rng: RngStream) -> SearchOutcome:
    positions = [_random_mask(dim, rng) for _ in range(params.population_size)]
    velocities = [np.zeros(dim) for _ in range(params.population_size)]
    pbest = [x.copy() for x in positions]
    pbest_fit = [evaluate(x) for x in positions]
    gen_best = min(range(len(pbest_fit)), key=lambda i: (pbest_fit[i], i))
    gbest, gbest_fit = pbest[gen_best].copy(), pbest_fit[gen_best]
    trace = [TraceRow(0, gbest_fit, 0, 0, False)]
    for t in range(params.max_iterations):
        gbest, gbest_fit = bpso_step(positions, velocities, pbest, pbest_fit,
                                     gbest, gbest_fit, params, evaluate, rng)
        trace.append(TraceRow(t + 1, gbest_fit, 0, 0, False))
    return SearchOutcome(best_mask=gbest.copy(), best_fitness=gbest_fit, trace=trace)
